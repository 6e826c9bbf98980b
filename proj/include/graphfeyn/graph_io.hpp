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

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "graphfeyn/graph.hpp"

namespace graphfeyn {

// Graph file schema:
//   {"vertices": [{"id": str, "m": num = 1, "v": num = 0}, ...],
//    "edges":    [{"u": id, "w": id, "b": num, "theta": num = 0}, ...]}
// "theta" is theta(u, w); theta(w, u) = -theta(u, w). An edge with b = 0 is
// not a graph edge; a theta given on it is reported by validate().

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline double number_field(const nlohmann::json& obj, const char* key, double fallback,
                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ParseError(where + "." + key + ": expected a number");
  return it->get<double>();
}

inline std::string string_field(const nlohmann::json& obj, const char* key,
                                const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + "." + key + ": missing");
  if (!it->is_string()) throw ParseError(where + "." + key + ": expected a string");
  return it->get<std::string>();
}

}  // namespace detail

inline Instance parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON at " + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level: expected an object");
  auto vs = doc.find("vertices");
  if (vs == doc.end() || !vs->is_array()) throw ParseError("vertices: expected an array");

  std::vector<std::string> ids;
  std::vector<double> measure;
  std::vector<std::optional<double>> potential;
  for (std::size_t i = 0; i < vs->size(); ++i) {
    const auto& item = (*vs)[i];
    const std::string where = "vertices[" + std::to_string(i) + "]";
    if (!item.is_object()) throw ParseError(where + ": expected an object");
    ids.push_back(detail::string_field(item, "id", where));
    measure.push_back(detail::number_field(item, "m", 1.0, where));
    potential.push_back(detail::number_field(item, "v", 0.0, where));
  }

  std::unordered_map<std::string, Vertex> index;
  for (Vertex x = 0; x < ids.size(); ++x) {
    if (!index.emplace(ids[x], x).second) {
      throw ParseError("vertices: duplicate id '" + ids[x] + "'");
    }
  }

  std::vector<EdgeSpec> edges;
  MagneticPotential theta;
  std::map<std::pair<Vertex, Vertex>, std::size_t> seen;
  if (auto es = doc.find("edges"); es != doc.end()) {
    if (!es->is_array()) throw ParseError("edges: expected an array");
    for (std::size_t i = 0; i < es->size(); ++i) {
      const auto& item = (*es)[i];
      const std::string where = "edges[" + std::to_string(i) + "]";
      if (!item.is_object()) throw ParseError(where + ": expected an object");
      auto lookup = [&](const char* key) {
        const auto id = detail::string_field(item, key, where);
        auto it = index.find(id);
        if (it == index.end()) throw ParseError(where + "." + key + ": unknown vertex '" + id + "'");
        return it->second;
      };
      const Vertex u = lookup("u");
      const Vertex w = lookup("w");
      if (!item.contains("b")) throw ParseError(where + ".b: missing");
      const double b = detail::number_field(item, "b", 0.0, where);
      if (!seen.emplace(std::minmax(u, w), i).second) {
        throw ParseError(where + ": pair {" + ids[u] + "," + ids[w] + "} appears more than once");
      }
      if (b != 0.0) edges.push_back({u, w, b});
      if (item.contains("theta")) theta.set(u, w, detail::number_field(item, "theta", 0.0, where));
    }
  }
  return Instance{WeightedGraph(std::move(ids), std::move(measure), std::move(edges)),
                  std::move(theta), ElectricPotential(std::move(potential))};
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

inline nlohmann::json to_json(const Instance& inst) {
  nlohmann::json vs = nlohmann::json::array();
  for (Vertex x = 0; x < inst.graph.size(); ++x) {
    nlohmann::json item{{"id", inst.graph.id(x)}, {"m", inst.graph.measure(x)}};
    if (inst.v.has(x)) item["v"] = inst.v(x);
    vs.push_back(std::move(item));
  }
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : inst.graph.edges()) {
    es.push_back({{"u", inst.graph.id(e.u)},
                  {"w", inst.graph.id(e.w)},
                  {"b", e.b},
                  {"theta", inst.theta(e.u, e.w)}});
  }
  return {{"vertices", std::move(vs)}, {"edges", std::move(es)}};
}

}  // namespace graphfeyn
