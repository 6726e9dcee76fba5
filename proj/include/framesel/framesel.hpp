/* Copyright 2026 The Framesel Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FRAMESEL_FRAMESEL_HPP
#define FRAMESEL_FRAMESEL_HPP

#include "framesel/acquisition.hpp"
#include "framesel/artifacts.hpp"
#include "framesel/core.hpp"
#include "framesel/csv.hpp"
#include "framesel/errors.hpp"
#include "framesel/experiment_io.hpp"
#include "framesel/manifest.hpp"
#include "framesel/pool_state_io.hpp"
#include "framesel/preprocess.hpp"
#include "framesel/report.hpp"
#include "framesel/rng.hpp"
#include "framesel/round_log_io.hpp"
#include "framesel/simulator.hpp"
#include "framesel/tensor.hpp"
#include "framesel/tensor_io.hpp"

#endif  // FRAMESEL_FRAMESEL_HPP
