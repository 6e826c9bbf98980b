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

// The graphfeyn command line. `run` is the whole program; tools/graphfeyn.cpp
// only forwards argv and the standard streams.

#pragma once

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphfeyn/builders.hpp"
#include "graphfeyn/exact.hpp"
#include "graphfeyn/exhaustion.hpp"
#include "graphfeyn/feynman_mc.hpp"
#include "graphfeyn/graph.hpp"
#include "graphfeyn/graph_io.hpp"
#include "graphfeyn/output.hpp"
#include "graphfeyn/precision.hpp"
#include "graphfeyn/sampler.hpp"

namespace graphfeyn::cli {

/// Everything a command needs, as parsed from the command line.
struct RunConfig {
  std::string command;
  std::string graph;
  std::string primed_graph;
  double t = 1.0;
  std::vector<double> t_grid;
  std::string mode;
  std::string source;
  std::string target;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::uint64_t max_jumps = 1u << 20;
  std::uint64_t chunk_size = 4096;
  unsigned workers = 1;
  std::string out;
  std::string override_v;
  std::optional<double> flux;
  std::vector<std::size_t> radii{5, 10, 20, 50, 100};
  std::string precision = "quad";

  SamplerConfig sampler() const {
    SamplerConfig cfg;
    cfg.max_jumps = max_jumps;
    cfg.seed = seed;
    cfg.chunk_size = chunk_size;
    cfg.workers = workers;
    cfg.check();
    return cfg;
  }

  const std::vector<double>& times() const {
    if (t_grid.empty()) throw InputError("--t-grid must not be empty");
    return t_grid;
  }
};

inline unsigned default_workers() {
  if (const char* env = std::getenv("GRAPHFEYN_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Loads --graph (a JSON file or "builtin:<descriptor>") and applies
/// --flux and --override-v.
inline Instance load_graph(const std::string& where, const RunConfig& cfg) {
  if (where.empty()) throw InputError("--graph is required");
  Instance inst;
  constexpr std::string_view prefix = "builtin:";
  if (where.rfind(prefix, 0) == 0) {
    StandardSpec spec = parse_standard(std::string_view(where).substr(prefix.size()));
    if (cfg.flux) {
      if (spec.family != Family::harper_box) throw InputError("--flux needs a builtin:harper graph");
      spec.alpha = *cfg.flux;
    }
    inst = build_standard(spec);
  } else {
    if (cfg.flux) throw InputError("--flux needs a builtin:harper graph");
    inst = load_instance(where);
  }
  if (!cfg.override_v.empty()) {
    const std::size_t n = inst.graph.size();
    if (cfg.override_v == "neg-deg") {
      std::vector<double> v = degrees(inst.graph);
      for (auto& x : v) x = -x;
      inst.v = ElectricPotential::from(v);
    } else if (cfg.override_v == "zero") {
      inst.v = ElectricPotential::zeros(n);
    } else {
      double c = 0.0;
      try {
        std::size_t used = 0;
        c = std::stod(cfg.override_v, &used);
        if (used != cfg.override_v.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError("--override-v expects neg-deg, zero or a number");
      }
      inst.v = ElectricPotential::from(std::vector<double>(n, c));
    }
  }
  return inst;
}

namespace detail {

inline Vertex vertex(const Instance& inst, const std::string& id, const char* flag) {
  if (id.empty()) throw InputError(std::string(flag) + " is required");
  return inst.graph.index_of(id);
}

/// Selected (x, y) pairs: the given --source/--target, or every pair.
inline std::vector<Vertex> sources(const Instance& inst, const RunConfig& cfg) {
  if (!cfg.source.empty()) return {inst.graph.index_of(cfg.source)};
  std::vector<Vertex> all(inst.graph.size());
  for (Vertex x = 0; x < all.size(); ++x) all[x] = x;
  return all;
}

inline std::vector<Vertex> targets(const Instance& inst, const RunConfig& cfg) {
  if (!cfg.target.empty()) return {inst.graph.index_of(cfg.target)};
  std::vector<Vertex> all(inst.graph.size());
  for (Vertex x = 0; x < all.size(); ++x) all[x] = x;
  return all;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_graph(cfg.graph, cfg);
  const auto report = validate(inst);
  if (report.empty()) {
    out << "valid: " << inst.graph.size() << " vertices, " << inst.graph.edges().size()
        << " edges\n";
    return 0;
  }
  for (const auto& v : report) out << v.message << '\n';
  return static_cast<int>(ExitCode::input_error);
}

inline int cmd_exact_kernel(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_graph(cfg.graph, cfg);
  const auto op = assemble_operator(inst);
  const auto k = cfg.mode == "semigroup" ? semigroup_kernel_exact(op, cfg.t) : unitary_kernel_exact(op, cfg.t);
  write_kernel_csv(out, k);
  return 0;
}

inline int cmd_mc_kernel(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_graph(cfg.graph, cfg);
  const Vertex x = vertex(inst, cfg.source, "--source");
  const Vertex y = vertex(inst, cfg.target, "--target");
  const auto sampler = cfg.sampler();
  const MCEstimate e = cfg.mode == "semigroup"
                           ? mc_semigroup_kernel(inst, x, y, cfg.t, cfg.samples, sampler)
                           : mc_unitary_kernel(inst, x, y, cfg.t, cfg.samples, sampler);
  out << estimate_json(e, cfg.t, cfg.source, cfg.target, cfg.seed).dump() << '\n';
  return 0;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_graph(cfg.graph, cfg);
  const bool semigroup = cfg.mode == "semigroup";
  const auto sampler = cfg.sampler();
  const auto op = assemble_operator(inst);
  const Spectrum<double> spectrum(op);
  const auto xs = sources(inst, cfg);
  const auto ys = targets(inst, cfg);
  FullPrecision guard(out);
  out << "x,y,t,exact_re,exact_im,mc_re,mc_im,stderr_re,stderr_im,z\n";
  bool all_ok = true;
  for (double t : cfg.times()) {
    const auto exact = semigroup ? spectrum.semigroup(t) : spectrum.unitary(t);
    for (Vertex x : xs) {
      std::vector<MCEstimate> row;
      if (t >= 0.0) {
        row = semigroup ? mc_semigroup_row(inst, x, t, cfg.samples, sampler)
                        : mc_unitary_row(inst, x, t, cfg.samples, sampler);
      } else if (!semigroup) {
        for (Vertex y = 0; y < inst.graph.size(); ++y) {
          row.push_back(mc_unitary_kernel(inst, x, y, t, cfg.samples, sampler));
        }
      } else {
        throw InputError("semigroup comparison needs t >= 0");
      }
      for (Vertex y : ys) {
        const auto ref = exact.at(x, y);
        const double z = row[y].z_score(ref);
        all_ok = all_ok && z <= 4.0;
        out << inst.graph.id(x) << ',' << inst.graph.id(y) << ',' << t << ',' << ref.real() << ','
            << ref.imag() << ',' << row[y].mean.real() << ',' << row[y].mean.imag() << ','
            << row[y].stderr_re << ',' << row[y].stderr_im << ',' << z << '\n';
      }
    }
  }
  return all_ok ? 0 : static_cast<int>(ExitCode::acceptance_failure);
}

inline int cmd_kato_simon(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_graph(cfg.graph, cfg);
  const bool mc = cfg.mode == "mc";
  const auto xs = sources(inst, cfg);
  const auto ys = targets(inst, cfg);
  const auto sampler = cfg.sampler();
  FullPrecision guard(out);
  out << "x,y,t,semigroup,abs_unitary,margin,stderr\n";
  bool all_ok = true;
  for (double t : cfg.times()) {
    std::vector<KatoSimonResult> table;
    if (!mc) table = kato_simon_exact_all(inst, t);
    for (Vertex x : xs) {
      for (Vertex y : ys) {
        const KatoSimonResult r = mc ? kato_simon_margin(inst, x, y, t, EvalMode::mc, cfg.samples, sampler)
                                     : table[x * inst.graph.size() + y];
        all_ok = all_ok && (mc ? r.margin >= -4.0 * r.stderr : r.margin >= -1e-10);
        out << inst.graph.id(x) << ',' << inst.graph.id(y) << ',' << t << ',' << r.semigroup << ','
            << r.unitary_abs << ',' << r.margin << ',' << r.stderr << '\n';
      }
    }
  }
  return all_ok ? 0 : static_cast<int>(ExitCode::acceptance_failure);
}

inline int cmd_scattering(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_graph(cfg.graph, cfg);
  const Instance primed = cfg.primed_graph.empty() ? inst : load_graph(cfg.primed_graph, cfg);
  if (cfg.mode == "mc") {
    const Vertex x = vertex(inst, cfg.source, "--source");
    const Vertex y = vertex(inst, cfg.target, "--target");
    const auto e = mc_scattering_kernel(inst, primed, x, y, cfg.t, cfg.samples, cfg.sampler());
    out << estimate_json(e, cfg.t, cfg.source, cfg.target, cfg.seed).dump() << '\n';
    return 0;
  }
  if (!same_weighted_graph(inst.graph, primed.graph)) {
    throw InputError("scattering needs both instances on the same weighted graph");
  }
  write_kernel_csv(out, scattering_kernel_exact(inst, primed, VertexSet::all(inst.graph.size()), cfg.t));
  return 0;
}

inline int cmd_exhaustion(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance inst = load_graph(cfg.graph, cfg);
  const Vertex center = vertex(inst, cfg.source, "--source");
  std::vector<std::complex<double>> f(inst.graph.size(), 0.0);
  f[center] = 1.0;
  const Evolution mode = cfg.mode == "semigroup" ? Evolution::semigroup : Evolution::unitary;
  const ExhaustionReport report =
      cfg.precision == "double"
          ? exhaustion_study<double>(inst, f, cfg.t, cfg.radii, center, mode)
          : exhaustion_study<quad>(inst, f, cfg.t, cfg.radii, center, mode);
  if (report.warning) err << "warning: " << *report.warning << '\n';
  write_exhaustion_csv(out, report);
  return 0;
}

inline int cmd_sample_paths(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_graph(cfg.graph, cfg);
  const Vertex x = vertex(inst, cfg.source, "--source");
  if (!(cfg.t >= 0.0)) throw InputError("--t must be >= 0");
  const auto sampler = cfg.sampler();
  const JumpModel model(inst.graph);
  write_path_csv_header(out);
  JumpPath path;
  for (std::uint64_t begin = 0, chunk = 0; begin < cfg.samples; begin += sampler.chunk_size, ++chunk) {
    Stream stream(sampler.seed, chunk);
    const std::uint64_t count = std::min(sampler.chunk_size, cfg.samples - begin);
    for (std::uint64_t i = 0; i < count; ++i) {
      sample_path_into(model, x, cfg.t, sampler, stream, path);
      check_path(inst.graph, path);
      write_path_csv(out, inst.graph, begin + i, path);
    }
  }
  return 0;
}

}  // namespace detail

/// Runs the CLI. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"graphfeyn: magnetic Schrodinger groups on weighted graphs, exact and by path integrals"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.workers = default_workers();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph, "graph JSON file or builtin:<path:N|cycle:N|lattice:D:S|harper:S[:ALPHA]>")
        ->required();
    sub->add_option("--override-v", cfg.override_v, "replace v by neg-deg, zero or a constant");
    sub->add_option("--flux", cfg.flux, "flux per plaquette for builtin:harper graphs");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--samples", cfg.samples, "number of sampled paths")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--max-jumps", cfg.max_jumps, "explosion cap per path")->check(CLI::PositiveNumber);
    sub->add_option("--chunk-size", cfg.chunk_size, "paths per RNG stream")->check(CLI::PositiveNumber);
    sub->add_option("--workers", cfg.workers, "worker threads (default $GRAPHFEYN_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a graph file");
  common(validate_cmd);

  auto* exact_cmd = app.add_subcommand("exact-kernel", "exact kernel matrix as CSV");
  common(exact_cmd);
  exact_cmd->add_option("--t", cfg.t, "time");
  exact_cmd->add_option("--mode", cfg.mode)->check(CLI::IsMember({"unitary", "semigroup"}))->default_str("unitary");

  auto* mc_cmd = app.add_subcommand("mc-kernel", "Monte Carlo kernel entry as JSON");
  common(mc_cmd);
  sampling(mc_cmd);
  mc_cmd->add_option("--t", cfg.t, "time (negative allowed in unitary mode)");
  mc_cmd->add_option("--source", cfg.source)->required();
  mc_cmd->add_option("--target", cfg.target)->required();
  mc_cmd->add_option("--mode", cfg.mode)->check(CLI::IsMember({"unitary", "semigroup"}));

  auto* compare_cmd = app.add_subcommand("compare", "Monte Carlo against exact kernels");
  common(compare_cmd);
  sampling(compare_cmd);
  compare_cmd->add_option("--t-grid", cfg.t_grid, "times")->required()->delimiter(',');
  compare_cmd->add_option("--source", cfg.source);
  compare_cmd->add_option("--target", cfg.target);
  compare_cmd->add_option("--mode", cfg.mode)->check(CLI::IsMember({"unitary", "semigroup"}));

  auto* ks_cmd = app.add_subcommand("kato-simon", "domination margins");
  common(ks_cmd);
  sampling(ks_cmd);
  ks_cmd->add_option("--t-grid", cfg.t_grid, "times")->required()->delimiter(',');
  ks_cmd->add_option("--source", cfg.source);
  ks_cmd->add_option("--target", cfg.target);
  ks_cmd->add_option("--mode", cfg.mode)->check(CLI::IsMember({"exact", "mc"}));

  auto* scat_cmd = app.add_subcommand("scattering", "kernel of exp(-itL) exp(itL')");
  common(scat_cmd);
  sampling(scat_cmd);
  scat_cmd->add_option("--primed-graph", cfg.primed_graph, "instance carrying v', theta' (default: --graph)");
  scat_cmd->add_option("--t", cfg.t, "time >= 0");
  scat_cmd->add_option("--source", cfg.source);
  scat_cmd->add_option("--target", cfg.target);
  scat_cmd->add_option("--mode", cfg.mode)->check(CLI::IsMember({"exact", "mc"}));

  auto* exh_cmd = app.add_subcommand("exhaustion", "convergence along ball exhaustions");
  common(exh_cmd);
  exh_cmd->add_option("--t", cfg.t, "time");
  exh_cmd->add_option("--source", cfg.source, "ball center")->required();
  exh_cmd->add_option("--radii", cfg.radii, "strictly increasing radii")->delimiter(',');
  exh_cmd->add_option("--mode", cfg.mode)->check(CLI::IsMember({"unitary", "semigroup"}));
  exh_cmd->add_option("--precision", cfg.precision)->check(CLI::IsMember({"double", "quad"}));

  auto* paths_cmd = app.add_subcommand("sample-paths", "dump sampled jump paths as CSV");
  common(paths_cmd);
  sampling(paths_cmd);
  paths_cmd->add_option("--t", cfg.t, "horizon");
  paths_cmd->add_option("--source", cfg.source)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::input_error);
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      err << "error: cannot write '" << cfg.out << "'\n";
      return static_cast<int>(ExitCode::input_error);
    }
  }
  std::ostream& sink = cfg.out.empty() ? out : file;

  try {
    if (cfg.command == "validate") return detail::cmd_validate(cfg, sink);
    if (cfg.command == "exact-kernel") return detail::cmd_exact_kernel(cfg, sink);
    if (cfg.command == "mc-kernel") return detail::cmd_mc_kernel(cfg, sink);
    if (cfg.command == "compare") return detail::cmd_compare(cfg, sink);
    if (cfg.command == "kato-simon") return detail::cmd_kato_simon(cfg, sink);
    if (cfg.command == "scattering") return detail::cmd_scattering(cfg, sink);
    if (cfg.command == "exhaustion") return detail::cmd_exhaustion(cfg, sink, err);
    if (cfg.command == "sample-paths") return detail::cmd_sample_paths(cfg, sink);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::input_error);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::parse_error);
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << '\n';
    return static_cast<int>(ExitCode::resource_cap);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return static_cast<int>(ExitCode::input_error);
}

/// Convenience wrapper for tests: runs with string arguments.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"graphfeyn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace graphfeyn::cli
