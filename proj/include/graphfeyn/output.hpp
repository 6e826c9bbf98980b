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

#include <ostream>
#include <string>

#include <json.hpp>

#include "graphfeyn/estimate.hpp"
#include "graphfeyn/exact.hpp"
#include "graphfeyn/exhaustion.hpp"

namespace graphfeyn {

/// Restores the stream's precision and format flags on scope exit.
class FullPrecision {
 public:
  explicit FullPrecision(std::ostream& os) : os_(os), precision_(os.precision(17)), flags_(os.flags()) {
    os_.unsetf(std::ios::floatfield);
  }
  ~FullPrecision() {
    os_.precision(precision_);
    os_.flags(flags_);
  }
  FullPrecision(const FullPrecision&) = delete;
  FullPrecision& operator=(const FullPrecision&) = delete;

 private:
  std::ostream& os_;
  std::streamsize precision_;
  std::ios::fmtflags flags_;
};

/// Kernel CSV: header x,y,re,im and one row per ordered pair in vertex order.
template <class Real>
void write_kernel_csv(std::ostream& os, const KernelMatrix<Real>& k) {
  FullPrecision guard(os);
  os << "x,y,re,im\n";
  for (std::size_t x = 0; x < k.size(); ++x) {
    for (std::size_t y = 0; y < k.size(); ++y) {
      const auto z = k.at(x, y);
      os << k.ids[x] << ',' << k.ids[y] << ',' << z.real() << ',' << z.imag() << '\n';
    }
  }
}

inline nlohmann::json estimate_json(const MCEstimate& e, double t, const std::string& x,
                                    const std::string& y, std::uint64_t seed) {
  return {{"re", e.mean.real()},
          {"im", e.mean.imag()},
          {"stderr_re", e.stderr_re},
          {"stderr_im", e.stderr_im},
          {"n", e.n_samples},
          {"n_exploded", e.n_exploded},
          {"t", t},
          {"x", x},
          {"y", y},
          {"seed", seed}};
}

/// Report CSV: radius,ball_size,deviation.
inline void write_exhaustion_csv(std::ostream& os, const ExhaustionReport& r) {
  FullPrecision guard(os);
  os << "radius,ball_size,deviation\n";
  for (std::size_t k = 0; k < r.radii.size(); ++k) {
    os << r.radii[k] << ',' << r.ball_sizes[k] << ',' << r.deviations[k] << '\n';
  }
}

}  // namespace graphfeyn
