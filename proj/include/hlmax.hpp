// Copyright 2026 The hlmax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef HLMAX_HLMAX_HPP
#define HLMAX_HLMAX_HPP

#include "hlmax/czdecomp.hpp"
#include "hlmax/errors.hpp"
#include "hlmax/io.hpp"
#include "hlmax/maximal.hpp"
#include "hlmax/orlicz.hpp"
#include "hlmax/random.hpp"
#include "hlmax/space.hpp"
#include "hlmax/suite.hpp"
#include "hlmax/verify.hpp"
#include "hlmax/weights.hpp"

#endif  // HLMAX_HLMAX_HPP
