/*
 * Copyright 2026 The ultrazero Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "ultrazero/archipelago.hpp"
#include "ultrazero/constructions.hpp"
#include "ultrazero/disjoint_sets.hpp"
#include "ultrazero/error.hpp"
#include "ultrazero/locfin_groups.hpp"
#include "ultrazero/lomega.hpp"
#include "ultrazero/metric_space.hpp"
#include "ultrazero/pipeline.hpp"
#include "ultrazero/rational.hpp"
#include "ultrazero/retract.hpp"
#include "ultrazero/scale_analysis.hpp"
