/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>

#include "ergocert/drift.hpp"
#include "ergocert/norms.hpp"
#include "ergocert/spectral.hpp"

namespace ergocert {

namespace {

using ordered_json = nlohmann::ordered_json;

// Doubles enter every document rounded to 12 significant digits so repeated
// runs serialise byte-identically; non-finite values become strings/null
// (JSON has no inf/nan literals).
double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

ordered_json jnum(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round12(v);
}

ordered_json jvec(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (double e : v) a.push_back(jnum(e));
  return a;
}

ordered_json certificate_json(const Verdict& v) {
  if (std::holds_alternative<std::monostate>(v.certificate)) return nullptr;
  ordered_json j;
  if (const auto* g = std::get_if<GeometricRate>(&v.certificate)) {
    j["type"] = "geometric_rate";
    j["rho"] = jnum(g->rho);
    j["C"] = jnum(g->C);
    if (!g->C_x.empty()) j["C_x"] = jvec(g->C_x);
  } else if (const auto* d = std::get_if<DriftCert>(&v.certificate)) {
    j["type"] = "drift";
    j["lambda"] = jnum(d->lambda);
    j["b"] = jnum(d->b);
    j["S"] = d->S;
    j["V"] = jvec(d->V.values());
    ordered_json moments;
    for (const auto& [order, value] : d->pi_V_moments)
      moments[std::to_string(order)] = jnum(value);
    j["pi_V_moments"] = std::move(moments);
  } else if (const auto* r = std::get_if<ReturnTimeCert>(&v.certificate)) {
    j["type"] = "return_time";
    j["kappa_star"] = jnum(r->kappa_star);
    j["kappa"] = jnum(r->kappa);
    j["taboo_radius"] = jnum(r->taboo_radius);
    j["S"] = r->S;
    j["mgf"] = jvec(r->mgf);
  } else if (const auto* s = std::get_if<SpectralReport>(&v.certificate)) {
    j["type"] = "spectral";
    j["norm_space"] = norm_space_name(s->norm_space);
    j["radius"] = jnum(s->radius);
    j["converged"] = s->converged;
    if (s->eigenvalue_one_multiplicity)
      j["eigenvalue_one_multiplicity"] = *s->eigenvalue_one_multiplicity;
    ordered_json iters = ordered_json::array();
    for (const auto& [n, est] : s->gelfand_iterates)
      iters.push_back(ordered_json::array({n, jnum(est)}));
    j["iterates"] = std::move(iters);
  } else if (const auto* b = std::get_if<NormBound>(&v.certificate)) {
    j["type"] = "norm_bound";
    j["m"] = b->m;
    j["value"] = jnum(b->value);
  }
  return j;
}

std::vector<ConditionId> parse_condition_filter(const std::string& spec) {
  std::vector<ConditionId> ids;
  if (spec == "all") {
    for (int k = 1; k <= kNumConditions; ++k)
      ids.push_back(static_cast<ConditionId>(k));
    return ids;
  }
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto id = condition_from_roman(token);
    if (!id)
      fail(Err::BadParameters,
           "unknown condition '" + token + "' in condition filter");
    ids.push_back(*id);
  }
  if (ids.empty())
    fail(Err::BadParameters, "condition filter selects nothing");
  return ids;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Err::BadParameters, "cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) fail(Err::BadParameters, "failed while writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(Err::BadParameters, "cannot move '" + tmp + "' to '" + path + "'");
  }
}

ordered_json report_to_json(const ChainSpec& chain, const RunConfig& config,
                            const ConsistencyReport& rep) {
  const auto filter = parse_condition_filter(config.conditions);

  ordered_json j;
  j["schema"] = 1;
  j["chain"] = {{"size", chain.size()}, {"states", chain.states}};
  j["config"] = {{"n_max", config.n_max},
                 {"j_set", config.j_set},
                 {"p_set", [&] {
                    ordered_json a = ordered_json::array();
                    for (double p : config.p_set) a.push_back(jnum(p));
                    return a;
                  }()},
                 {"rate_tol", jnum(config.rate_tol)},
                 {"conditions", config.conditions},
                 {"seed", config.seed}};
  j["structure"] = {
      {"irreducible", rep.structure.irreducible},
      {"period", rep.structure.period},
      {"aperiodic", rep.structure.aperiodic},
      {"reversible", rep.structure.reversible},
      {"num_recurrent_classes", rep.structure.num_recurrent_classes},
      {"reversibility_residual", jnum(rep.structure.reversibility_residual)}};

  ordered_json verdicts = ordered_json::array();
  for (const Verdict& v : rep.verdicts) {
    if (std::find(filter.begin(), filter.end(), v.id) == filter.end())
      continue;
    ordered_json jv;
    jv["condition"] = roman(v.id);
    jv["outcome"] = outcome_name(v.outcome);
    jv["certificate"] = certificate_json(v);
    ordered_json diag;
    for (const auto& [key, value] : v.diagnostics) diag[key] = jnum(value);
    jv["diagnostics"] = std::move(diag);
    verdicts.push_back(std::move(jv));
  }
  j["verdicts"] = std::move(verdicts);

  ordered_json edges = ordered_json::array();
  ordered_json violations = ordered_json::array();
  for (const EdgeCheck& e : rep.edges) {
    ordered_json je;
    je["from"] = roman(e.from);
    je["to"] = roman(e.to);
    switch (e.status) {
      case EdgeCheck::Status::Consistent: je["status"] = "consistent"; break;
      case EdgeCheck::Status::Violated: je["status"] = "violated"; break;
      case EdgeCheck::Status::Skipped:
        je["status"] = "skipped";
        je["reason"] = e.reason;
        break;
    }
    if (e.status == EdgeCheck::Status::Violated)
      violations.push_back({{"from", roman(e.from)}, {"to", roman(e.to)}});
    edges.push_back(std::move(je));
  }
  j["consistency"] = {{"edges", std::move(edges)},
                      {"violations", std::move(violations)}};

  j["rates"] = {{"pointwise_tv", jnum(rep.rates.pointwise_tv)},
                {"v_uniform", jnum(rep.rates.v_uniform)},
                {"norm_decay", jnum(rep.rates.norm_decay)},
                {"gelfand_linf_v", jnum(rep.rates.gelfand_linf_v)},
                {"pi_perp", jnum(rep.rates.pi_perp)},
                {"eigen_oracle", jnum(rep.rates.eigen_oracle)},
                {"max_delta", jnum(rep.rates.max_delta)},
                {"coherent", rep.rates.coherent}};

  ordered_json sj = ordered_json::array();
  for (double p : stationary(chain).pi) sj.push_back(jnum(p));
  j["stationary"] = std::move(sj);
  return j;
}

const char* recipe_kind_name(ZooRecipe::Kind kind) {
  switch (kind) {
    case ZooRecipe::Kind::TwoState: return "two-state";
    case ZooRecipe::Kind::Cycle: return "cycle";
    case ZooRecipe::Kind::Uniform: return "uniform";
    case ZooRecipe::Kind::RandomDense: return "random-dense";
    case ZooRecipe::Kind::RandomReversible: return "random-reversible";
    case ZooRecipe::Kind::MetropolisGrid: return "metropolis-grid";
    case ZooRecipe::Kind::TruncatedHeavyTail: return "heavy-tail";
    case ZooRecipe::Kind::Lazy: return "lazy";
  }
  return "?";
}

ordered_json recipe_json(const ZooRecipe& recipe) {
  ordered_json j;
  j["kind"] = recipe_kind_name(recipe.kind);
  switch (recipe.kind) {
    case ZooRecipe::Kind::TwoState:
      j["a"] = jnum(recipe.a);
      j["b"] = jnum(recipe.b);
      break;
    case ZooRecipe::Kind::Cycle:
    case ZooRecipe::Kind::Uniform:
      j["N"] = recipe.N;
      break;
    case ZooRecipe::Kind::RandomDense:
    case ZooRecipe::Kind::RandomReversible:
      j["N"] = recipe.N;
      j["seed"] = recipe.seed;
      break;
    case ZooRecipe::Kind::MetropolisGrid:
      j["width"] = recipe.width;
      j["seed"] = recipe.seed;
      if (!recipe.target_weights.empty())
        j["target_weights"] = jvec(recipe.target_weights);
      break;
    case ZooRecipe::Kind::TruncatedHeavyTail:
      j["N"] = recipe.N;
      j["alpha"] = jnum(recipe.alpha);
      break;
    case ZooRecipe::Kind::Lazy:
      j["epsilon"] = jnum(recipe.epsilon);
      if (recipe.base) j["base"] = recipe_json(*recipe.base);
      break;
  }
  return j;
}

bool has_json_extension(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

Matrix rows_to_matrix(const std::vector<Vec>& rows, const std::string& path) {
  const std::size_t n = rows.size();
  Matrix M(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (rows[x].size() != n)
      fail(Err::DimensionMismatch,
           "row " + std::to_string(x) + " of '" + path + "' has " +
               std::to_string(rows[x].size()) + " entries, expected " +
               std::to_string(n));
    for (std::size_t y = 0; y < n; ++y) M(x, y) = rows[x][y];
  }
  return M;
}

ChainSpec load_chain_json(const std::string& path, const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Err::BadParameters, "cannot parse '" + path + "': " + e.what());
  }
  if (!j.contains("P") || !j["P"].is_array())
    fail(Err::BadParameters, "'" + path + "' is missing the \"P\" matrix");
  std::vector<Vec> raw;
  for (const auto& row : j["P"]) {
    if (!row.is_array())
      fail(Err::BadParameters, "matrix rows must be arrays in '" + path + "'");
    Vec r;
    for (const auto& e : row) {
      if (!e.is_number())
        fail(Err::BadParameters, "matrix entries must be numbers");
      r.push_back(e.get<double>());
    }
    raw.push_back(std::move(r));
  }
  std::vector<std::string> labels;
  if (j.contains("states")) {
    for (const auto& s : j["states"]) {
      if (!s.is_string())
        fail(Err::BadParameters, "state labels must be strings");
      labels.push_back(s.get<std::string>());
    }
  }
  return validate_chain(rows_to_matrix(raw, path), std::move(labels));
}

ChainSpec load_chain_csv(const std::string& path, const std::string& text) {
  std::vector<Vec> raw;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Vec row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && *end == ' ') ++end;
      if (end == cell.c_str() || (end && *end != '\0'))
        fail(Err::BadParameters,
             "cannot parse '" + cell + "' as a number in '" + path + "'");
      row.push_back(v);
    }
    raw.push_back(std::move(row));
  }
  return validate_chain(rows_to_matrix(raw, path));
}

}  // namespace

void RunConfig::validate() const {
  if (n_max < 8) fail(Err::BadParameters, "n_max must be at least 8");
  if (j_set.empty()) fail(Err::BadParameters, "j_set must be nonempty");
  for (long j : j_set)
    if (j < 1) fail(Err::BadParameters, "moment orders must be >= 1");
  for (double p : p_set)
    if (!(p > 1.0)) fail(Err::BadParameters, "p values must exceed 1");
  if (!(rate_tol > 0.0)) fail(Err::BadParameters, "rate_tol must be positive");
  parse_condition_filter(conditions);
}

ConditionConfig RunConfig::condition_config() const {
  ConditionConfig c;
  c.n_max = n_max;
  c.j_set = j_set;
  c.p_set = p_set;
  c.rate_tol = rate_tol;
  c.seed = seed;
  return c;
}

ChainSpec load_chain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::BadParameters, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return has_json_extension(path) ? load_chain_json(path, text)
                                  : load_chain_csv(path, text);
}

nlohmann::ordered_json chain_to_json(const ChainSpec& chain) {
  ordered_json j;
  j["states"] = chain.states;
  ordered_json rows = ordered_json::array();
  for (std::size_t x = 0; x < chain.size(); ++x) {
    ordered_json row = ordered_json::array();
    for (std::size_t y = 0; y < chain.size(); ++y)
      row.push_back(jnum(chain.P(x, y)));
    rows.push_back(std::move(row));
  }
  j["P"] = std::move(rows);
  return j;
}

void save_chain_json(const ChainSpec& chain, const std::string& path) {
  write_text_atomic(path, chain_to_json(chain).dump(2) + "\n");
}

nlohmann::ordered_json analysis_report(const ChainSpec& chain,
                                       const RunConfig& config) {
  config.validate();
  const StationaryDist pi = stationary(chain);
  const ConsistencyReport rep =
      cross_validate(chain, pi, config.condition_config());
  return report_to_json(chain, config, rep);
}

int exit_code_for(const ConsistencyReport& report) {
  return report.violated_edges().empty() ? kExitOk : kExitViolations;
}

int run_analyze(const std::string& chain_path, const RunConfig& config,
                const std::string& out_path) {
  try {
    config.validate();
    const ChainSpec chain = load_chain(chain_path);
    const StationaryDist pi = stationary(chain);
    const ConsistencyReport rep =
        cross_validate(chain, pi, config.condition_config());
    const std::string text = report_to_json(chain, config, rep).dump(2) + "\n";
    if (out_path.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      write_text_atomic(out_path, text);
    }
    return exit_code_for(rep);
  } catch (const Error& e) {
    std::fprintf(stderr, "ergocert: %s\n", e.what());
    return kExitInputError;
  }
}

int run_decay(const std::string& chain_path, const RunConfig& config,
              const std::string& out_csv) {
  try {
    config.validate();
    const ChainSpec chain = load_chain(chain_path);
    const StationaryDist pi = stationary(chain);
    const std::size_t N = chain.size();

    // Weight the per-state bound by the synthesized drift function; fall
    // back to V = 1 when no return-time certificate is available.
    WeightFunction V = WeightFunction::ones(N);
    try {
      const StateSet S = default_small_set(pi);
      const double kappa = default_kappa(kappa_star(chain, S));
      V = synthesize_drift(chain, S, kappa, config.j_set).V;
    } catch (const Error&) {
    }

    std::string csv = "n,state,tv,vnorm_bound\n";
    kernels::PowerWalk walk(deviation_kernel(chain, pi));
    char buf[256];
    for (long n = 1; n <= config.n_max; ++n) {
      const auto& sp = (n == 1) ? walk.current() : walk.step();
      const double scale = std::exp(sp.log_scale);
      for (std::size_t x = 0; x < N; ++x) {
        double l1 = 0.0, lv = 0.0;
        const double* row = sp.M.row(x);
        for (std::size_t y = 0; y < N; ++y) {
          l1 += std::abs(row[y]);
          lv += std::abs(row[y]) * V[y];
        }
        std::snprintf(buf, sizeof(buf), "%ld,%s,%.12g,%.12g\n", n,
                      chain.states[x].c_str(), 0.5 * scale * l1,
                      scale * lv / V[x]);
        csv += buf;
      }
    }
    write_text_atomic(out_csv, csv);
    return kExitOk;
  } catch (const Error& e) {
    std::fprintf(stderr, "ergocert: %s\n", e.what());
    return kExitInputError;
  }
}

int run_zoo(const ZooRecipe& recipe, const std::string& out_path) {
  try {
    const ChainSpec chain = generate(recipe);
    ordered_json j;
    j["recipe"] = recipe_json(recipe);
    const ordered_json cj = chain_to_json(chain);
    j["states"] = cj["states"];
    j["P"] = cj["P"];
    write_text_atomic(out_path, j.dump(2) + "\n");
    return kExitOk;
  } catch (const Error& e) {
    std::fprintf(stderr, "ergocert: %s\n", e.what());
    return kExitInputError;
  }
}

int run_crossval(const std::string& chain_path, const RunConfig& config) {
  try {
    config.validate();
    const ChainSpec chain = load_chain(chain_path);
    const StationaryDist pi = stationary(chain);
    const ConsistencyReport rep =
        cross_validate(chain, pi, config.condition_config());

    long holds = 0, fails = 0, na = 0;
    for (const Verdict& v : rep.verdicts) {
      if (v.outcome == Outcome::Holds) ++holds;
      else if (v.outcome == Outcome::Fails) ++fails;
      else ++na;
    }
    long consistent = 0, skipped = 0;
    const auto violated = rep.violated_edges();
    for (const EdgeCheck& e : rep.edges) {
      if (e.status == EdgeCheck::Status::Consistent) ++consistent;
      else if (e.status == EdgeCheck::Status::Skipped) ++skipped;
    }
    std::printf("conditions: %ld hold, %ld fail, %ld not applicable\n", holds,
                fails, na);
    std::printf("edges: %ld consistent, %zu violated, %ld skipped\n",
                consistent, violated.size(), skipped);
    for (const EdgeCheck& e : violated)
      std::printf("violated: %s -> %s\n", roman(e.from), roman(e.to));
    if (rep.structure.reversible)
      std::printf("rates: eigen oracle %.6g, max delta %.3g (%s)\n",
                  rep.rates.eigen_oracle, rep.rates.max_delta,
                  rep.rates.coherent ? "coherent" : "incoherent");
    return exit_code_for(rep);
  } catch (const Error& e) {
    std::fprintf(stderr, "ergocert: %s\n", e.what());
    return kExitInputError;
  }
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"certify or refute geometric ergodicity of a finite Markov "
               "chain by cross-validated equivalent conditions"};
  app.require_subcommand(1);

  RunConfig config;
  auto add_config_flags = [&config](CLI::App* cmd) {
    cmd->add_option("--n-max", config.n_max,
                    "power-walk depth for decay sequences");
    cmd->add_option("--j-set", config.j_set, "moment orders (comma-separated)")
        ->delimiter(',');
    cmd->add_option("--p-set", config.p_set,
                    "L^p exponents for measure batteries (comma-separated)")
        ->delimiter(',');
    cmd->add_option("--rate-tol", config.rate_tol,
                    "tolerance for rate coherence against the eigen oracle");
    cmd->add_option("--conditions", config.conditions,
                    "\"all\" or comma-separated roman numerals to report");
    cmd->add_option("--seed", config.seed, "seed for measure batteries");
  };

  std::string chain_path, out_path;

  CLI::App* analyze =
      app.add_subcommand("analyze", "full condition analysis of a chain file");
  analyze->add_option("chain", chain_path, "chain file (.json or CSV)")
      ->required();
  analyze->add_option("--out", out_path, "report path (default: stdout)");
  add_config_flags(analyze);

  CLI::App* decay = app.add_subcommand(
      "decay", "per-state TV and V-norm decay sequences as CSV");
  decay->add_option("chain", chain_path, "chain file (.json or CSV)")
      ->required();
  std::string decay_out = "decay.csv";
  decay->add_option("--out", decay_out, "CSV output path");
  add_config_flags(decay);

  CLI::App* zoo = app.add_subcommand("zoo", "generate a named example chain");
  std::string kind;
  long zn = 8;
  std::uint64_t zseed = 0;
  double za = 0.3, zb = 0.2, zalpha = 2.5, zeps = 0.5;
  std::string zoo_out = "chain.json";
  zoo->add_option("kind", kind,
                  "two-state|cycle|uniform|random-dense|random-reversible|"
                  "metropolis-grid|heavy-tail|lazy-cycle|lazy-reversible")
      ->required();
  zoo->add_option("--n", zn, "number of states (grid width)");
  zoo->add_option("--seed", zseed, "generator seed");
  zoo->add_option("--a", za, "two-state: rate away from the first state");
  zoo->add_option("--b", zb, "two-state: rate away from the second state");
  zoo->add_option("--alpha", zalpha, "heavy-tail exponent");
  zoo->add_option("--epsilon", zeps, "laziness for lazy-* kinds");
  zoo->add_option("--out", zoo_out, "output chain path");

  CLI::App* crossval = app.add_subcommand(
      "crossval", "evaluate all conditions and assert the implication edges");
  crossval->add_option("chain", chain_path, "chain file (.json or CSV)")
      ->required();
  add_config_flags(crossval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (analyze->parsed()) return run_analyze(chain_path, config, out_path);
  if (decay->parsed()) return run_decay(chain_path, config, decay_out);
  if (crossval->parsed()) return run_crossval(chain_path, config);
  if (zoo->parsed()) {
    try {
      ZooRecipe recipe;
      if (kind == "two-state") {
        recipe = ZooRecipe::two_state(za, zb);
      } else if (kind == "cycle") {
        recipe = ZooRecipe::cycle(zn);
      } else if (kind == "uniform") {
        recipe = ZooRecipe::uniform(zn);
      } else if (kind == "random-dense") {
        recipe = ZooRecipe::random_dense(zn, zseed);
      } else if (kind == "random-reversible") {
        recipe = ZooRecipe::random_reversible(zn, zseed);
      } else if (kind == "metropolis-grid") {
        recipe = ZooRecipe::metropolis_grid(zn, {}, zseed);
      } else if (kind == "heavy-tail") {
        recipe = ZooRecipe::truncated_heavy_tail(zn, zalpha);
      } else if (kind == "lazy-cycle") {
        recipe = ZooRecipe::lazy(ZooRecipe::cycle(zn), zeps);
      } else if (kind == "lazy-reversible") {
        recipe = ZooRecipe::lazy(ZooRecipe::random_reversible(zn, zseed), zeps);
      } else {
        std::fprintf(stderr, "ergocert: unknown zoo kind '%s'\n", kind.c_str());
        return kExitInputError;
      }
      return run_zoo(recipe, zoo_out);
    } catch (const Error& e) {
      std::fprintf(stderr, "ergocert: %s\n", e.what());
      return kExitInputError;
    }
  }
  return kExitInputError;
}

}  // namespace ergocert
