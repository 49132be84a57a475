// Copyright 2026 The dpleak Authors
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

// Command-line front end: graph | analyze | transform | synth | compare |
// oracle. Kept in a header so tests can drive it without a subprocess.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dpleak/automorphism.hpp"
#include "dpleak/bounds.hpp"
#include "dpleak/channel.hpp"
#include "dpleak/errors.hpp"
#include "dpleak/graph.hpp"
#include "dpleak/io.hpp"
#include "dpleak/mechanisms.hpp"
#include "dpleak/oracle.hpp"
#include "dpleak/rational.hpp"
#include "dpleak/transforms.hpp"

namespace dpleak::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalid = 2,
  kIo = 3,
  kResource = 4,
};

// "hamming:u,v", "clique:n", "cycle:n", "path:n", "star:k", "petersen".
inline Graph parse_family(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<std::size_t> args;
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        args.push_back(static_cast<std::size_t>(value));
      } catch (const std::exception&) {
        throw ArgumentError("bad number '" + item + "' in family '" + spec + "'");
      }
    }
  }
  auto want = [&](std::size_t count) {
    if (args.size() != count)
      throw ArgumentError("family '" + name + "' takes " + std::to_string(count) +
                          " argument(s): '" + spec + "'");
  };
  if (name == "hamming") {
    want(2);
    return build_hamming(args[0], args[1]);
  }
  if (name == "clique") {
    want(1);
    return build_clique(args[0]);
  }
  if (name == "cycle") {
    want(1);
    return build_cycle(args[0]);
  }
  if (name == "path") {
    want(1);
    return build_path(args[0]);
  }
  if (name == "star") {
    want(1);
    return build_star(args[0]);
  }
  if (name == "petersen") {
    want(0);
    return build_petersen();
  }
  throw ArgumentError("unknown graph family '" + name + "'");
}

// --epsilon accepts decimals and "ln<k>" (exact ratio 1/k); --ratio accepts
// decimals and p/q.
inline PrivacyParameter parse_privacy(const std::optional<std::string>& epsilon,
                                      const std::optional<std::string>& ratio) {
  if (epsilon.has_value() == ratio.has_value())
    throw ArgumentError("give exactly one of --epsilon and --ratio");
  if (ratio) return PrivacyParameter::from_ratio(parse_rational(*ratio));
  const std::string& e = *epsilon;
  if (e.rfind("ln", 0) == 0) {
    const Rational base = parse_rational(e.substr(2));
    if (base < 1) throw ArgumentError("ln<k> needs k >= 1");
    return PrivacyParameter::from_ratio(1 / base);
  }
  double value = 0;
  try {
    std::size_t used = 0;
    value = std::stod(e, &used);
    if (used != e.size()) throw std::invalid_argument(e);
  } catch (const std::exception&) {
    throw ArgumentError("bad --epsilon value '" + e + "'");
  }
  return PrivacyParameter::from_epsilon(value);
}

namespace detail {

inline std::string fmt(double x, int digits = 6) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string exact_and_decimal(const Rational& q) {
  return to_string(q) + " (" + fmt(to_double(q)) + ")";
}

inline std::string render_list(const std::vector<std::size_t>& xs) {
  std::string s = "(";
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + std::to_string(xs[k]);
  return s + ")";
}

struct GraphSource {
  std::optional<std::string> family;
  std::optional<std::string> file;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--family", family, "graph family: hamming:u,v clique:n cycle:n path:n star:k petersen");
    cmd->add_option("--graph", file, "graph JSON file");
  }
  bool present() const { return family || file; }
  Graph load() const {
    if (family.has_value() == file.has_value())
      throw ArgumentError("give exactly one of --family and --graph");
    return family ? parse_family(*family) : read_graph_file(*file);
  }
};

struct PrivacySource {
  std::optional<std::string> epsilon;
  std::optional<std::string> ratio;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--epsilon", epsilon, "privacy level epsilon (decimal or ln<k>)");
    cmd->add_option("--ratio", ratio, "privacy ratio r = e^-epsilon (p/q or decimal)");
  }
  bool present() const { return epsilon || ratio; }
  PrivacyParameter load() const { return parse_privacy(epsilon, ratio); }
};

struct MatrixSource {
  std::optional<std::string> file;
  std::optional<std::string> fixture;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--matrix", file, "channel matrix (CSV, or JSON by extension)");
    cmd->add_option("--fixture", fixture, "built-in matrix: m1 | m2")
        ->check(CLI::IsMember({"m1", "m2"}));
  }
  ChannelMatrix load() const {
    if (file.has_value() == fixture.has_value())
      throw ArgumentError("give exactly one of --matrix and --fixture");
    if (fixture) return *fixture == "m1" ? fixture_m1() : fixture_m2();
    return read_matrix_file(*file);
  }
};

inline ChannelMatrix load_named_matrix(const std::string& name) {
  if (name == "m1") return fixture_m1();
  if (name == "m2") return fixture_m2();
  return read_matrix_file(name);
}

inline std::string matrix_display_name(const std::string& name) {
  if (name == "m1" || name == "m2") return name;
  const auto slash = name.find_last_of('/');
  std::string stem = slash == std::string::npos ? name : name.substr(slash + 1);
  const auto dot = stem.find_last_of('.');
  return dot == std::string::npos ? stem : stem.substr(0, dot);
}

inline Prior load_prior(const std::optional<std::string>& path, const ChannelMatrix& m) {
  if (!path) return Prior::uniform(m.rows());
  return prior_from_csv(read_text_file(*path), m.row_labels());
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

}  // namespace detail

// ---------------------------------------------------------------------------
// graph

struct GraphOptions {
  detail::GraphSource graph;
  std::string format = "text";
  std::size_t effort = SearchBudget{}.max_nodes;
};

inline int cmd_graph(const GraphOptions& opt, std::ostream& out) {
  const Graph g = opt.graph.load();
  const std::size_t n = g.vertex_count();
  std::map<std::size_t, std::size_t, std::greater<>> degree_counts;
  for (Vertex v = 0; v < n; ++v) ++degree_counts[g.degree(v)];
  const bool connected = g.connected();

  std::optional<DistanceProfile> profile;
  std::optional<DistanceProfile> uniform;
  std::optional<IntersectionArray> ia;
  if (connected && n > 0) {
    profile = distance_profile(g, 0);
    uniform = uniform_distance_profile(g);
    ia = is_distance_regular(g);
  }
  SearchBudget budget;
  budget.max_nodes = opt.effort;
  const VtPlusResult vt = vt_plus_certificate(g, budget);

  if (opt.format == "json") {
    Json degrees = Json::object();
    for (auto [d, c] : degree_counts) degrees[std::to_string(d)] = c;
    Json j{{"n", n},
           {"edges", g.edges().size()},
           {"degrees", degrees},
           {"connected", connected},
           {"vt_plus", to_string(vt.verdict)},
           {"vt_plus_method", vt.method}};
    if (connected) {
      j["diameter"] = g.distances().diameter();
      j["profile"] = profile->counts;
      j["profile_base_independent"] = uniform.has_value();
      j["distance_regular"] = ia.has_value();
      if (ia) j["intersection_array"] = {{"b", ia->b}, {"c", ia->c}};
    }
    if (vt.group_order) j["automorphism_group_order"] = *vt.group_order;
    detail::emit(out, j);
    return kOk;
  }

  out << "vertices: " << n << "\n";
  out << "edges: " << g.edges().size() << "\n";
  out << "degrees:";
  for (auto [d, c] : degree_counts) out << " " << d << " (x" << c << ")";
  out << "\n";
  if (!connected) {
    out << "connected: no\n";
    out << "distance-regular: n/a (disconnected); VT+: " << to_string(vt.verdict) << "\n";
    out << "VT+ detail: " << vt.method << "\n";
    return kOk;
  }
  out << "diameter: " << g.distances().diameter() << "\n";
  out << "profile: " << detail::render_list(profile->counts)
      << (uniform ? " [same from every vertex]" : " [depends on base vertex]") << "\n";
  out << "distance-regular: " << (ia ? "yes" : "no") << "; VT+: " << to_string(vt.verdict) << "\n";
  if (ia)
    out << "intersection array: b=" << detail::render_list(ia->b)
        << ", c=" << detail::render_list(ia->c) << "\n";
  out << "VT+ detail: " << vt.method;
  if (vt.group_order) out << " (|Aut| = " << *vt.group_order << ")";
  out << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  detail::MatrixSource matrix;
  detail::GraphSource graph;
  detail::PrivacySource privacy;
  std::optional<std::string> prior;
  std::optional<double> tolerance;
  std::string format = "text";
};

inline int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out) {
  const ChannelMatrix m = opt.matrix.load();
  const Prior p = detail::load_prior(opt.prior, m);
  // The m1 fixture is rounded to three decimals.
  const double tol = opt.tolerance.value_or(opt.matrix.fixture == "m1" ? 1e-2 : 1e-9);

  std::optional<Graph> g;
  if (opt.graph.present()) g = opt.graph.load();
  std::optional<PrivacyParameter> pp;
  if (opt.privacy.present()) pp = opt.privacy.load();

  const Rational success = posterior_success(p, m);
  const Rational util = utility(p, m, GainFunction::binary(), GuessStrategy::optimal());
  const Rational colmax = column_max_sum(m);

  Json j{{"prior_min_entropy_bits", min_entropy(p)},
         {"max_prior", to_string(max_probability(p))},
         {"posterior_success", to_string(success)},
         {"posterior_min_entropy_bits", -log2(success)},
         {"leakage_bits", leakage(p, m)},
         {"min_capacity_bits", min_capacity(m)},
         {"column_max_sum", to_string(colmax)},
         {"utility", to_string(util)},
         {"utility_value", to_double(util)},
         {"prior_uniform", p.is_uniform()}};
  std::vector<std::string> lines;

  if (g) {
    const DpAudit audit = dp_audit(m, *g);
    j["audit"] = audit_to_json(audit, m);
    lines.push_back("eps_star: " + detail::fmt(audit.eps_star) + " (max adjacent ratio " +
                    (audit.max_ratio ? to_string(*audit.max_ratio) : std::string("inf")) + ")");
    if (pp) {
      const bool ok = audit.is_dp(*pp, tol);
      j["epsilon"] = pp->epsilon();
      j["is_dp"] = ok;
      j["is_dp_exact"] = audit.is_dp_exact(*pp);
      j["tolerance"] = tol;
      lines.push_back("dp at epsilon " + detail::fmt(pp->epsilon()) + " (tol " +
                      detail::fmt(tol, 9) + "): " + (ok ? "yes" : "no"));
    }
  }
  lines.push_back("prior min-entropy: " + detail::fmt(min_entropy(p)) + " bits (max prior " +
                  to_string(max_probability(p)) + ")");
  lines.push_back("posterior success: " + detail::exact_and_decimal(success));
  lines.push_back("posterior min-entropy: " + detail::fmt(-log2(success)) + " bits");
  lines.push_back("leakage: " + detail::fmt(leakage(p, m)) + " bits");
  lines.push_back("min-capacity: " + detail::fmt(min_capacity(m)) + " bits (column-max sum " +
                  to_string(colmax) + ")");
  lines.push_back("utility (binary gain, optimal guess): " + detail::exact_and_decimal(util));

  if (g && pp && g->connected()) {
    if (auto profile = uniform_distance_profile(*g)) {
      const BoundReport ub = utility_bound(*profile, *pp);
      const BoundReport pb = posterior_entropy_bound(*profile, *pp);
      const bool applicable = p.is_uniform() && m.rows() == g->vertex_count();
      const std::string attains =
          applicable ? (success == ub.probability ? "yes" : "no") : "n/a (non-uniform prior)";
      Json bounds = Json::array({bound_to_json(pb), bound_to_json(ub)});
      lines.push_back("utility bound: " + detail::exact_and_decimal(ub.probability) +
                      "; attains bound: " + attains);
      lines.push_back("posterior entropy bound: " + detail::fmt(pb.bits) +
                      " bits; attains bound: " + attains);
      if (const auto& shape = g->hamming_shape()) {
        const BoundReport lb = hamming_leakage_bound(shape->individuals, shape->values, *pp);
        bounds.push_back(bound_to_json(lb));
        lines.push_back("leakage bound: " + detail::fmt(lb.bits) + " bits; attains bound: " +
                        attains);
      }
      j["bounds"] = std::move(bounds);
      j["attains_bound"] = attains;
    } else {
      lines.push_back("bounds: n/a (distance profile depends on the base vertex)");
    }
  }

  if (opt.format == "json") {
    detail::emit(out, j);
  } else {
    for (const auto& line : lines) out << line << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// transform

struct TransformOptions {
  detail::MatrixSource matrix;
  detail::GraphSource graph;
  detail::PrivacySource privacy;
  std::optional<std::string> diagonal_out;
  std::optional<std::string> symmetric_out;
  std::string format = "text";
  std::size_t effort = SearchBudget{}.max_nodes;
};

inline int cmd_transform(const TransformOptions& opt, std::ostream& out) {
  const ChannelMatrix m = opt.matrix.load();
  const Graph g = opt.graph.load();
  std::optional<PrivacyParameter> pp;
  if (opt.privacy.present()) pp = opt.privacy.load();
  SearchBudget budget;
  budget.max_nodes = opt.effort;

  const PipelineResult result = canonicalize(m, g, pp, budget);
  const Prior uniform = Prior::uniform(m.rows());
  const Rational s0 = posterior_success(uniform, m);
  const Rational s1 = posterior_success(uniform, result.diagonal.matrix);
  const Rational s2 = posterior_success(uniform, result.symmetric.matrix);
  const DpAudit a0 = dp_audit(m, g), a1 = dp_audit(result.diagonal.matrix, g),
                a2 = dp_audit(result.symmetric.matrix, g);

  if (opt.diagonal_out) write_text_file(*opt.diagonal_out, matrix_to_csv(result.diagonal.matrix));
  if (opt.symmetric_out)
    write_text_file(*opt.symmetric_out, matrix_to_csv(result.symmetric.matrix));

  if (opt.format == "json") {
    detail::emit(out, Json{{"diagonal", matrix_to_json(result.diagonal.matrix)},
                           {"symmetric", matrix_to_json(result.symmetric.matrix)},
                           {"symmetry", result.symmetric.symmetry},
                           {"success", {to_string(s0), to_string(s1), to_string(s2)}},
                           {"eps_star",
                            {real_to_json(a0.eps_star), real_to_json(a1.eps_star),
                             real_to_json(a2.eps_star)}},
                           {"success_preserved", s0 == s1 && s1 == s2}});
    return kOk;
  }
  out << "# diagonal form\n" << matrix_to_csv(result.diagonal.matrix);
  out << "# symmetric form (" << result.symmetric.symmetry << ")\n"
      << matrix_to_csv(result.symmetric.matrix);
  out << "uniform success: " << to_string(s0) << " -> " << to_string(s1) << " -> "
      << to_string(s2) << (s0 == s1 && s1 == s2 ? " (preserved)" : " (CHANGED)") << "\n";
  out << "eps_star: " << detail::fmt(a0.eps_star) << " -> " << detail::fmt(a1.eps_star) << " -> "
      << detail::fmt(a2.eps_star) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  detail::GraphSource graph;
  detail::PrivacySource privacy;
  std::optional<std::string> out_file;
  // Optional oblivious composition K = H o f over an input graph.
  std::optional<std::string> input_graph;
  std::optional<std::string> fmap;
  std::string format = "text";
};

inline int cmd_synth(const SynthOptions& opt, std::ostream& out) {
  const Graph g = opt.graph.load();
  const PrivacyParameter pp = opt.privacy.load();
  const MechanismBundle bundle = optimal_mechanism(g, pp);
  const Json bundle_json = bundle_to_json(bundle);
  if (opt.out_file) write_text_file(*opt.out_file, bundle_json.dump(2) + "\n");

  const Rational util = utility(Prior::uniform(g.vertex_count()), bundle.matrix,
                                GainFunction::binary(), GuessStrategy::optimal());

  if (opt.input_graph.has_value() != opt.fmap.has_value())
    throw ArgumentError("--input-graph and --fmap go together");
  std::optional<ObliviousComposition> composed;
  std::optional<Graph> inputs;
  if (opt.fmap) {
    inputs = read_graph_file(*opt.input_graph);
    std::vector<std::string> input_labels = inputs->labels(), answer_labels = g.labels();
    if (input_labels.empty()) input_labels = dpleak::detail::default_labels(inputs->vertex_count());
    if (answer_labels.empty()) answer_labels = dpleak::detail::default_labels(g.vertex_count());
    composed = compose_oblivious(
        *inputs, fmap_from_csv(read_text_file(*opt.fmap), input_labels, answer_labels), bundle);
  }

  if (opt.format == "json") {
    Json j = bundle_json;
    j["utility"] = to_string(util);
    if (composed) {
      j["composition"] = {{"matrix", matrix_to_json(composed->matrix)},
                          {"answer_graph", graph_to_json(composed->answer_graph)},
                          {"audit", audit_to_json(dp_audit(composed->matrix, *inputs),
                                                  composed->matrix)}};
    }
    detail::emit(out, j);
    return kOk;
  }
  out << "normalization c: " << detail::exact_and_decimal(bundle.c) << "\n";
  out << "utility (uniform prior): " << detail::exact_and_decimal(util) << "\n";
  out << "eps_star: " << detail::fmt(dp_audit(bundle.matrix, g).eps_star) << "\n";
  if (opt.out_file) out << "bundle written to " << *opt.out_file << "\n";
  out << matrix_to_csv(bundle.matrix);
  if (composed) {
    const auto audit = dp_audit(composed->matrix, *inputs);
    out << "# composed with the query map\n";
    out << "induced answer edges: " << composed->answer_graph.edges().size() << "\n";
    out << "eps_star on inputs: " << detail::fmt(audit.eps_star) << "\n";
    out << matrix_to_csv(composed->matrix);
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareOptions {
  std::vector<std::string> matrices;
  std::vector<std::string> priors;
  std::string format = "csv";
};

inline int cmd_compare(const CompareOptions& opt, std::ostream& out) {
  if (opt.matrices.empty()) throw ArgumentError("compare needs at least one --matrix");
  std::vector<std::pair<std::string, ChannelMatrix>> ms;
  for (const auto& name : opt.matrices)
    ms.emplace_back(detail::matrix_display_name(name), detail::load_named_matrix(name));
  for (const auto& [name, m] : ms)
    if (m.rows() != ms.front().second.rows())
      throw ArgumentError("matrices have different input counts");

  std::vector<std::pair<std::string, std::optional<std::string>>> priors{{"uniform", std::nullopt}};
  for (const auto& path : opt.priors) priors.emplace_back(detail::matrix_display_name(path), path);

  Json rows = Json::array();
  std::string csv = "prior";
  for (const auto& [name, m] : ms) csv += "," + name + "_utility," + name + "_leakage_bits";
  csv += "\n";
  for (const auto& [prior_name, path] : priors) {
    csv += prior_name;
    Json row{{"prior", prior_name}};
    for (const auto& [name, m] : ms) {
      const Prior p = detail::load_prior(path, m);
      const Rational u = utility(p, m, GainFunction::binary(), GuessStrategy::optimal());
      const double leak = leakage(p, m);
      csv += "," + detail::fmt(to_double(u)) + "," + detail::fmt(leak);
      row[name] = {{"utility", to_string(u)}, {"utility_value", to_double(u)},
                   {"leakage_bits", leak}};
    }
    csv += "\n";
    rows.push_back(std::move(row));
  }
  if (opt.format == "json") {
    detail::emit(out, rows);
  } else {
    out << csv;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleOptions {
  detail::GraphSource graph;
  detail::PrivacySource privacy;
  std::string method = "hillclimb";
  std::uint64_t seed = 0;
  std::uint64_t iters = 10'000;
  std::string step = "1/12";
  std::size_t count = 10;
  std::string start = "uniform";
  std::string format = "text";
};

inline int cmd_oracle(const OracleOptions& opt, std::ostream& out) {
  const Graph g = opt.graph.load();
  const PrivacyParameter pp = opt.privacy.load();
  std::optional<BoundReport> bound;
  if (g.connected())
    if (auto profile = uniform_distance_profile(g)) bound = utility_bound(*profile, pp);

  if (opt.method == "random") {
    const auto sample = random_dp_sample(g, pp, opt.count, opt.seed);
    double worst_eps = 0;
    Rational best_util = 0;
    Json matrices = Json::array();
    for (const auto& m : sample) {
      worst_eps = std::max(worst_eps, dp_audit(m, g).eps_star);
      const Rational u = posterior_success(Prior::uniform(m.rows()), m);
      if (u > best_util) best_util = u;
      matrices.push_back(matrix_to_json(m));
    }
    Json j{{"method", "random"},
           {"seed", opt.seed},
           {"count", sample.size()},
           {"max_eps_star", worst_eps},
           {"best_utility", to_string(best_util)}};
    if (bound) j["utility_bound"] = to_string(bound->probability);
    if (opt.format == "json") {
      j["matrices"] = std::move(matrices);
      detail::emit(out, j);
    } else {
      out << "method: random\nseed: " << opt.seed << "\nmatrices: " << sample.size()
          << "\nmax eps_star: " << detail::fmt(worst_eps)
          << "\nbest utility: " << detail::exact_and_decimal(best_util) << "\n";
      if (bound) out << "utility bound: " << detail::exact_and_decimal(bound->probability) << "\n";
    }
    return kOk;
  }

  SearchReport report;
  if (opt.method == "grid") {
    report = grid_search_optimal(g, pp, parse_rational(opt.step));
  } else {
    HillclimbOptions h;
    h.iterations = opt.iters;
    h.seed = opt.seed;
    h.start = opt.start == "synthesized" ? HillclimbStart::kSynthesized : HillclimbStart::kUniform;
    report = hillclimb_utility(g, pp, h);
  }
  if (opt.format == "json") {
    Json j = search_report_to_json(report);
    if (bound) {
      j["utility_bound"] = to_string(bound->probability);
      j["exceeds_bound"] = report.best_utility > bound->probability;
    }
    detail::emit(out, j);
    return kOk;
  }
  out << "method: " << report.method << "\nseed: " << report.seed << "\ntrials: " << report.trials
      << "\nbest utility: " << detail::exact_and_decimal(report.best_utility) << "\n";
  if (bound)
    out << "utility bound: " << detail::exact_and_decimal(bound->probability)
        << (report.best_utility > bound->probability ? " (EXCEEDED)" : " (not exceeded)") << "\n";
  out << matrix_to_csv(report.best_matrix);
  return kOk;
}

// ---------------------------------------------------------------------------

// Runs the CLI on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Privacy audits, leakage measures and mechanism synthesis for channel matrices", "dpleak"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"text", "json"};

  GraphOptions graph_opt;
  auto* graph_cmd = app.add_subcommand("graph", "classify an adjacency graph");
  graph_opt.graph.add_options(graph_cmd);
  graph_cmd->add_option("--format", graph_opt.format)->check(CLI::IsMember(formats));
  graph_cmd->add_option("--effort", graph_opt.effort, "automorphism search node budget");

  AnalyzeOptions analyze_opt;
  auto* analyze_cmd = app.add_subcommand("analyze", "privacy, leakage and utility of a matrix");
  analyze_opt.matrix.add_options(analyze_cmd);
  analyze_opt.graph.add_options(analyze_cmd);
  analyze_opt.privacy.add_options(analyze_cmd);
  analyze_cmd->add_option("--prior", analyze_opt.prior, "prior CSV (label,value)");
  analyze_cmd->add_option("--tol", analyze_opt.tolerance, "DP check tolerance on ln-ratio");
  analyze_cmd->add_option("--format", analyze_opt.format)->check(CLI::IsMember(formats));

  TransformOptions transform_opt;
  auto* transform_cmd = app.add_subcommand("transform", "diagonal and symmetric canonical forms");
  transform_opt.matrix.add_options(transform_cmd);
  transform_opt.graph.add_options(transform_cmd);
  transform_opt.privacy.add_options(transform_cmd);
  transform_cmd->add_option("--diagonal-out", transform_opt.diagonal_out, "write diagonal form CSV");
  transform_cmd->add_option("--symmetric-out", transform_opt.symmetric_out, "write symmetric form CSV");
  transform_cmd->add_option("--format", transform_opt.format)->check(CLI::IsMember(formats));
  transform_cmd->add_option("--effort", transform_opt.effort, "automorphism search node budget");

  SynthOptions synth_opt;
  auto* synth_cmd = app.add_subcommand("synth", "optimal-utility DP mechanism");
  synth_opt.graph.add_options(synth_cmd);
  synth_opt.privacy.add_options(synth_cmd);
  synth_cmd->add_option("--out", synth_opt.out_file, "write mechanism bundle JSON");
  synth_cmd->add_option("--input-graph", synth_opt.input_graph, "input graph JSON for --fmap");
  synth_cmd->add_option("--fmap", synth_opt.fmap, "query map CSV (input,answer)");
  synth_cmd->add_option("--format", synth_opt.format)->check(CLI::IsMember(formats));

  CompareOptions compare_opt;
  auto* compare_cmd = app.add_subcommand("compare", "utility and leakage side by side");
  compare_cmd->add_option("--matrix", compare_opt.matrices, "matrix file or fixture name (m1, m2)")
      ->required();
  compare_cmd->add_option("--prior", compare_opt.priors, "extra prior CSV files");
  compare_cmd->add_option("--format", compare_opt.format)->check(CLI::IsMember({"csv", "json"}));

  OracleOptions oracle_opt;
  auto* oracle_cmd = app.add_subcommand("oracle", "search for DP mechanisms independently");
  oracle_opt.graph.add_options(oracle_cmd);
  oracle_opt.privacy.add_options(oracle_cmd);
  oracle_cmd->add_option("--method", oracle_opt.method)
      ->check(CLI::IsMember({"grid", "hillclimb", "random"}));
  oracle_cmd->add_option("--seed", oracle_opt.seed);
  oracle_cmd->add_option("--iters", oracle_opt.iters);
  oracle_cmd->add_option("--step", oracle_opt.step, "grid step 1/q");
  oracle_cmd->add_option("--count", oracle_opt.count, "matrices for --method random");
  oracle_cmd->add_option("--start", oracle_opt.start)
      ->check(CLI::IsMember({"uniform", "synthesized"}));
  oracle_cmd->add_option("--format", oracle_opt.format)->check(CLI::IsMember(formats));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*graph_cmd) return cmd_graph(graph_opt, out);
    if (*analyze_cmd) return cmd_analyze(analyze_opt, out);
    if (*transform_cmd) return cmd_transform(transform_opt, out);
    if (*synth_cmd) return cmd_synth(synth_opt, out);
    if (*compare_cmd) return cmd_compare(compare_opt, out);
    if (*oracle_cmd) return cmd_oracle(oracle_opt, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kResource;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}

}  // namespace dpleak::cli
