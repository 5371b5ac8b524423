// Copyright 2026 The screenkit Authors
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


#pragma once

#include "screenkit/common.hpp"
#include "screenkit/model.hpp"
#include "screenkit/maxflow.hpp"
#include "screenkit/rng.hpp"
#include "screenkit/stochastics.hpp"
#include "screenkit/validation.hpp"
#include "screenkit/transfers.hpp"
#include "screenkit/solver.hpp"
#include "screenkit/generators.hpp"
#include "screenkit/theorems.hpp"
#include "screenkit/parallel.hpp"
#include "screenkit/applications/competitive.hpp"
#include "screenkit/applications/bundling.hpp"
#include "screenkit/applications/instances.hpp"
