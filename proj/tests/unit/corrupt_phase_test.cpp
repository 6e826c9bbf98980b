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

// Built with GRAPHFEYN_CORRUPT_PHASE_FOR_TESTING: the line integral enters the
// action with the wrong sign, and the comparison harness has to notice.

#include <gtest/gtest.h>

#include <sstream>

#include "graphfeyn/cli.hpp"
#include "support/random_instance.hpp"

#ifndef GRAPHFEYN_CORRUPT_PHASE_FOR_TESTING
#error "this test must be built with the corrupted phase"
#endif

namespace graphfeyn {
namespace {

TEST(CorruptedPhase, CompareDetectsDiscrepancy) {
  std::ostringstream out, err;
  const int code = cli::run({"compare", "--graph", testing::data_path("k2_flux.json"), "--t-grid", "0.5,1",
                             "--samples", "100000", "--seed", "1"},
                            out, err);
  EXPECT_EQ(code, 5) << out.str();
}

TEST(CorruptedPhase, ZeroFieldIsUnaffected) {
  std::ostringstream out, err;
  const int code = cli::run({"compare", "--graph", testing::data_path("k2.json"), "--t-grid", "1",
                             "--samples", "20000", "--seed", "1"},
                            out, err);
  EXPECT_EQ(code, 0) << out.str();
}

}  // namespace
}  // namespace graphfeyn
