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

#include <charconv>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "graphfeyn/graph.hpp"

namespace graphfeyn {

enum class Family { path, cycle, lattice_box, harper_box };

/// Descriptor of a standard unweighted family: b = 1, m = 1, v = 0.
struct StandardSpec {
  Family family = Family::path;
  int n = 1;          // vertex count for path/cycle, side length for boxes
  int dim = 2;        // lattice_box only
  double alpha = 0.0; // harper_box flux per plaquette
};

namespace detail {

inline Instance unit_instance(std::vector<std::string> ids, std::vector<EdgeSpec> edges) {
  const std::size_t n = ids.size();
  return Instance{WeightedGraph(std::move(ids), std::vector<double>(n, 1.0), std::move(edges)),
                  MagneticPotential{}, ElectricPotential::zeros(n)};
}

inline std::string coord_id(const std::vector<int>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += '_';
    s += std::to_string(c[i]);
  }
  return s;
}

}  // namespace detail

/// Path 0 - 1 - ... - (n-1). path(2) is the two-vertex graph K2.
inline Instance path_graph(int n) {
  if (n < 1) throw InputError("path needs n >= 1");
  std::vector<std::string> ids;
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) edges.push_back({Vertex(i), Vertex(i + 1), 1.0});
  return detail::unit_instance(std::move(ids), std::move(edges));
}

inline Instance cycle_graph(int n) {
  if (n < 1) throw InputError("cycle needs n >= 1");
  if (n <= 2) return path_graph(n);
  Instance inst = path_graph(n);
  std::vector<EdgeSpec> edges(inst.graph.edges().begin(), inst.graph.edges().end());
  edges.push_back({Vertex(n - 1), 0, 1.0});
  return detail::unit_instance(inst.graph.ids(), std::move(edges));
}

/// Box {0..side-1}^dim of the standard lattice; ids are coordinates joined by '_'.
inline Instance lattice_box(int dim, int side) {
  if (dim < 1) throw InputError("lattice box needs dim >= 1");
  if (side < 1) throw InputError("lattice box needs side >= 1");
  std::size_t count = 1;
  for (int d = 0; d < dim; ++d) {
    count *= static_cast<std::size_t>(side);
    if (count > (std::size_t{1} << 24)) throw ResourceError("lattice box too large");
  }
  std::vector<std::string> ids;
  std::vector<EdgeSpec> edges;
  std::vector<int> c(dim, 0);
  // Row-major index with the last coordinate fastest.
  auto index = [&](const std::vector<int>& p) {
    std::size_t k = 0;
    for (int d = 0; d < dim; ++d) k = k * side + p[d];
    return k;
  };
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rem = k;
    for (int d = dim - 1; d >= 0; --d) {
      c[d] = static_cast<int>(rem % side);
      rem /= side;
    }
    ids.push_back(detail::coord_id(c));
    for (int d = 0; d < dim; ++d) {
      if (c[d] + 1 < side) {
        auto next = c;
        ++next[d];
        edges.push_back({k, index(next), 1.0});
      }
    }
  }
  return detail::unit_instance(std::move(ids), std::move(edges));
}

/// Harper operator on a side x side box in Landau gauge:
/// theta((x1,x2),(x1+1,x2)) = 0, theta((x1,x2),(x1,x2+1)) = 2 pi alpha x1.
inline Instance harper_box(int side, double alpha) {
  Instance inst = lattice_box(2, side);
  if (alpha == 0.0) return inst;
  for (int x1 = 0; x1 < side; ++x1) {
    for (int x2 = 0; x2 + 1 < side; ++x2) {
      const Vertex from = static_cast<Vertex>(x1) * side + x2;
      inst.theta.set(from, from + 1, 2.0 * std::numbers::pi * alpha * x1);
    }
  }
  return inst;
}

inline Instance build_standard(const StandardSpec& spec) {
  switch (spec.family) {
    case Family::path: return path_graph(spec.n);
    case Family::cycle: return cycle_graph(spec.n);
    case Family::lattice_box: return lattice_box(spec.dim, spec.n);
    case Family::harper_box: return harper_box(spec.n, spec.alpha);
  }
  throw InputError("unknown family");
}

/// Parses "path:N", "cycle:N", "lattice:DIM:SIDE" or "harper:SIDE[:ALPHA]".
inline StandardSpec parse_standard(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    auto pos = text.find(':');
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  auto to_int = [](std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw InputError("bad integer '" + std::string(s) + "' in graph descriptor");
    }
    return v;
  };
  StandardSpec spec;
  const auto& kind = parts.front();
  if (kind == "path" && parts.size() == 2) {
    spec.family = Family::path;
    spec.n = to_int(parts[1]);
  } else if (kind == "cycle" && parts.size() == 2) {
    spec.family = Family::cycle;
    spec.n = to_int(parts[1]);
  } else if (kind == "lattice" && parts.size() == 3) {
    spec.family = Family::lattice_box;
    spec.dim = to_int(parts[1]);
    spec.n = to_int(parts[2]);
  } else if (kind == "harper" && (parts.size() == 2 || parts.size() == 3)) {
    spec.family = Family::harper_box;
    spec.n = to_int(parts[1]);
    if (parts.size() == 3) {
      try {
        spec.alpha = std::stod(std::string(parts[2]));
      } catch (const std::exception&) {
        throw InputError("bad flux '" + std::string(parts[2]) + "' in graph descriptor");
      }
    }
  } else {
    throw InputError("unknown graph descriptor");
  }
  return spec;
}

}  // namespace graphfeyn
