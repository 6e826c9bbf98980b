// Copyright 2026 The graphfeyn Authors
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

#include "graphfeyn/builders.hpp"
#include "graphfeyn/errors.hpp"
#include "graphfeyn/estimate.hpp"
#include "graphfeyn/exact.hpp"
#include "graphfeyn/exhaustion.hpp"
#include "graphfeyn/feynman_mc.hpp"
#include "graphfeyn/functionals.hpp"
#include "graphfeyn/graph.hpp"
#include "graphfeyn/graph_io.hpp"
#include "graphfeyn/output.hpp"
#include "graphfeyn/precision.hpp"
#include "graphfeyn/rng.hpp"
#include "graphfeyn/sampler.hpp"
