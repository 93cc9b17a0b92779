// Copyright 2026 The pufeval Authors
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

#pragma once

#include "pufeval/analysis.hpp"
#include "pufeval/confidence.hpp"
#include "pufeval/entropy.hpp"
#include "pufeval/errors.hpp"
#include "pufeval/hypothesis.hpp"
#include "pufeval/io.hpp"
#include "pufeval/report.hpp"
#include "pufeval/response_model.hpp"
#include "pufeval/simulation.hpp"
#include "pufeval/special_functions.hpp"
#include "pufeval/validation.hpp"
