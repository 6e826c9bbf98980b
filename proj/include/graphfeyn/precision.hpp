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

#include <complex>
#include <type_traits>

#include <boost/multiprecision/float128.hpp>

namespace graphfeyn {

/// IEEE binary128 (about 34 decimal digits). Used where differences far below
/// double round-off have to be resolved, e.g. exhaustion tails.
using quad = boost::multiprecision::float128;

template <class Real>
inline double to_double(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x;
  } else {
    return x.template convert_to<double>();
  }
}

template <class Real>
inline std::complex<double> to_double(const std::complex<Real>& z) {
  return {to_double(z.real()), to_double(z.imag())};
}

template <class Real>
inline std::complex<Real> from_double(const std::complex<double>& z) {
  return {Real(z.real()), Real(z.imag())};
}

}  // namespace graphfeyn
