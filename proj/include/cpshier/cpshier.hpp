// Copyright 2026 The cps-hier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CPSHIER_CPSHIER_HPP_
#define CPSHIER_CPSHIER_HPP_

#include "cpshier/cps.hpp"
#include "cpshier/error.hpp"
#include "cpshier/hierarchy.hpp"
#include "cpshier/measure.hpp"
#include "cpshier/rational.hpp"
#include "cpshier/structure.hpp"

#endif  // CPSHIER_CPSHIER_HPP_
