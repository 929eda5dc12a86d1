// Copyright 2026 The QLBE Authors
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

#include "qlbe/diffusion.hpp"
#include "qlbe/errors.hpp"
#include "qlbe/evolution.hpp"
#include "qlbe/gas.hpp"
#include "qlbe/generator.hpp"
#include "qlbe/grid.hpp"
#include "qlbe/kinematics.hpp"
#include "qlbe/quadrature.hpp"
