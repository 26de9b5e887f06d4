// Copyright 2026 The femda Authors
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

// Everything except the YAML config loader (femda/config.hpp), which needs yaml-cpp.

#ifndef FEMDA__FEMDA_HPP_
#define FEMDA__FEMDA_HPP_

#include "femda/classifiers.hpp"
#include "femda/dataio.hpp"
#include "femda/datagen.hpp"
#include "femda/error.hpp"
#include "femda/estimators.hpp"
#include "femda/harness.hpp"
#include "femda/metrics.hpp"
#include "femda/oracles.hpp"
#include "femda/spd.hpp"
#include "femda/types.hpp"
#include "femda/validation.hpp"

#endif  // FEMDA__FEMDA_HPP_
