// Copyright 2026 The qdarwin Authors
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

#ifndef QDARWIN_QDARWIN_HPP
#define QDARWIN_QDARWIN_HPP

#include "qdarwin/error.hpp"
#include "qdarwin/tolerances.hpp"
#include "qdarwin/layout.hpp"
#include "qdarwin/linalg.hpp"
#include "qdarwin/state.hpp"
#include "qdarwin/optimizer.hpp"
#include "qdarwin/entropy.hpp"
#include "qdarwin/objectivity.hpp"
#include "qdarwin/redundancy.hpp"
#include "qdarwin/zoo.hpp"

#endif  // QDARWIN_QDARWIN_HPP
