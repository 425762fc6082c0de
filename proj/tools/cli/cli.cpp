#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "config.hpp"
#include "rz2/rz2.hpp"

namespace rz2::cli {

using nlohmann::json;

namespace {

struct Options {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> z2_mode;
  std::optional<std::size_t> z2_n;
};

/// What a command produces before it is written out.
struct Outcome {
  json report;
  std::string csv;  ///< empty if the command has no tabular data
  std::string summary;
  int code = kSuccess;
};

json with_tol(double value, double tol) { return {{"value", value}, {"tol", tol}}; }

std::string fixed8(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  return buf;
}

json to_json(const ConditionReport& report) {
  json out = json::array();
  for (const auto& r : report) {
    out.push_back({{"stmt1", r.stmt1}, {"stmt2", r.stmt2}, {"stmt3", r.stmt3}});
  }
  return out;
}

json to_json(const std::vector<ComponentLabel>& labels) {
  json out = json::array();
  for (auto l : labels) out.push_back(std::string(to_string(l)));
  return out;
}

json to_json(const z2::Z2Problem& p) {
  auto bits = [](const std::vector<int>& v) { return json(v); };
  json q = json::array();
  for (const auto& d : p.dists) q.push_back(z2::format_rational(d.q));
  return {{"q", q}, {"a", bits(p.a)}, {"b", bits(p.b)}, {"c", bits(p.c)}, {"d", bits(p.d)}};
}

// --- check-theta -----------------------------------------------------------

Outcome check_theta(const ScenarioConfig& cfg, const Options& opt) {
  if (cfg.distributions.empty()) throw cfg.error_at("/distributions", "at least one distribution needed");
  Outcome o;
  o.report["distributions"] = json::array();
  std::vector<std::string> verdicts;
  for (std::size_t j = 0; j < cfg.distributions.size(); ++j) {
    const ThetaParams& p = cfg.distributions[j];
    const Membership m = is_probability(p);
    json entry;
    entry["params"] = cli::to_json(p);
    entry["probability"] = m.probability;
    entry["class"] = std::string(to_string(m.label));
    std::optional<double> bound;
    if (p.sigma_p > 0.0 && p.sigma_p < p.sigma) bound = kappa_bound(p.sigma, p.beta, p.sigma_p, p.beta_p);
    entry["kappa_bound"] = bound ? with_tol(*bound, kBoundaryTol) : json(nullptr);
    entry["fiber_mass"] = {fiber_mass(p, 0), fiber_mass(p, 1)};

    if (p.sigma > 0.0 && p.sigma_p > 0.0) {
      const double half = 20.0 * std::sqrt(p.sigma);
      double min0 = INFINITY, min1 = INFINITY;
      for (int i = 0; i < cfg.density.points; ++i) {
        const double t = p.beta - half + 2.0 * half * i / (cfg.density.points - 1);
        min0 = std::min(min0, fiber_density(p, 0, t));
        min1 = std::min(min1, fiber_density(p, 1, t));
      }
      entry["min_density"] = {min0, min1};
    } else {
      entry["min_density"] = nullptr;
    }

    std::string verdict = m.probability
                              ? "probability measure; class " + std::string(to_string(m.label))
                              : "not a probability measure";
    if (bound) verdict += "; bound " + fixed8(*bound);
    entry["verdict"] = verdict;
    verdicts.push_back(verdict);
    o.report["distributions"].push_back(entry);
  }

  if (opt.format == "csv") {
    const std::size_t idx = cfg.density.index;
    if (idx >= cfg.distributions.size()) {
      throw cfg.error_at("/density/index", "index out of range");
    }
    const ThetaParams& p = cfg.distributions[idx];
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,f0,f1\n";
    const double half = 20.0 * std::sqrt(p.sigma);
    for (int i = 0; i < cfg.density.points; ++i) {
      const double t = p.beta - half + 2.0 * half * i / (cfg.density.points - 1);
      csv << t << ',' << fiber_density(p, 0, t) << ',' << fiber_density(p, 1, t) << '\n';
    }
    o.csv = csv.str();
  }
  o.summary = verdicts.size() == 1 ? verdicts.front() : std::to_string(verdicts.size()) + " laws checked";
  return o;
}

// --- verify-eq1 ------------------------------------------------------------

Outcome verify_eq1(const ScenarioConfig& cfg, const Options& opt) {
  const FormsProblem problem = cfg.forms_problem();
  const double tol = opt.tol.value_or(kIdenticalTol);
  const double residual = eq1_residual(problem, cfg.grid);
  const bool same = residual <= tol;
  Outcome o;
  o.report["eq1_residual"] = with_tol(residual, tol);
  o.report["identically_distributed"] = same;
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv.precision(17);
    csv << "s1,s2,l1,l2,lhs_re,lhs_im,rhs_re,rhs_im,abs_diff\n";
    for (const auto& e : eq1_samples(problem, cfg.grid)) {
      csv << e.u.s << ',' << e.v.s << ',' << e.u.l.value() << ',' << e.v.l.value() << ','
          << e.lhs.real() << ',' << e.lhs.imag() << ',' << e.rhs.real() << ',' << e.rhs.imag()
          << ',' << std::abs(e.lhs - e.rhs) << '\n';
    }
    o.csv = csv.str();
  }
  std::ostringstream s;
  s << (same ? "identically distributed" : "not identically distributed") << "; residual "
    << residual << " (tol " << tol << ")";
  o.summary = s.str();
  return o;
}

// --- classify / heyde / ds ---------------------------------------------------

Outcome classify_problem(const FormsProblem& problem, const ScenarioConfig& cfg,
                         const Options& opt) {
  const double tol = opt.tol.value_or(kIdenticalTol);
  Outcome o;
  o.report["eq1_residual"] = with_tol(eq1_residual(problem, cfg.grid), tol);
  o.report["conditions"] = to_json(condition_report(problem));
  const auto labels = classify_components(problem, cfg.allow_vanishing, cfg.grid, tol);
  o.report["labels"] = to_json(labels);
  std::string joined;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    joined += (i ? " " : "") + std::string(to_string(labels[i]));
  }
  o.summary = "labels: " + joined;
  return o;
}

Outcome classify(const ScenarioConfig& cfg, const Options& opt) {
  return classify_problem(cfg.forms_problem(), cfg, opt);
}

json problem_json(const FormsProblem& p) {
  json dists = json::array();
  for (const auto& d : p.dists()) dists.push_back(cli::to_json(d));
  return {{"distributions", dists},
          {"coefficients",
           {{"a", cli::to_json(p.a())}, {"b", cli::to_json(p.b())}, {"c", cli::to_json(p.c())}, {"d", cli::to_json(p.d())}}},
          {"copy_of", p.copy_of()}};
}

Outcome heyde(const ScenarioConfig& cfg, const Options& opt) {
  cfg.require_ab();
  const FormsProblem problem = build_heyde(cfg.distributions, cfg.a, cfg.b);
  json built = problem_json(problem);
  Outcome o = classify_problem(problem, cfg, opt);
  o.report["built_problem"] = std::move(built);
  return o;
}

Outcome ds(const ScenarioConfig& cfg, const Options& opt) {
  cfg.require_ab();
  const FormsProblem problem = build_ds(cfg.distributions, cfg.a, cfg.b);
  json built = problem_json(problem);
  Outcome o = classify_problem(problem, cfg, opt);
  o.report["built_problem"] = std::move(built);
  return o;
}

// --- fd-verify -------------------------------------------------------------

Outcome fd_verify(const ScenarioConfig& cfg, const Options& opt) {
  FormsProblem problem = cfg.forms_problem();
  if (cfg.fd.symmetrize) problem = problem.symmetrized();
  if (cfg.fd.pivot >= problem.size()) throw cfg.error_at("/fd/pivot", "pivot out of range");
  const double tol = opt.tol.value_or(1e-9);
  const std::uint64_t seed = opt.seed.value_or(cfg.mc.seed);

  const Schedule sched = elimination_schedule(problem, cfg.fd.pivot);
  const EliminationCheck check = verify_elimination(problem, cfg.fd.pivot, cfg.fd.trials, tol, seed);
  const RealFunction psi = build_psi(problem, cfg.fd.pivot);
  const double h_set[] = {0.1, 0.7, 1.3};
  const auto degree = poly_degree(psi, h_set, 1e-9);

  Outcome o;
  o.report["eq1_residual"] = with_tol(eq1_residual(problem, cfg.grid), kIdenticalTol);
  o.report["pivot"] = cfg.fd.pivot;
  o.report["symmetrized"] = cfg.fd.symmetrize;
  json steps = json::array();
  for (const auto& s : sched.steps) {
    steps.push_back({{"phase", s.phase == ScheduleStep::Phase::K ? "k" : "l"},
                     {"var", s.var},
                     {"multiplier", s.multiplier}});
  }
  o.report["schedule"] = {{"renumbering", sched.renumbering},
                          {"n1", sched.n1},
                          {"n2", sched.n2},
                          {"n3", sched.n3},
                          {"order", sched.order()},
                          {"steps", steps}};
  o.report["trials"] = cfg.fd.trials;
  o.report["seed"] = seed;
  o.report["elimination_residual"] = with_tol(check.max_residual, tol);
  o.report["passed"] = check.ok();
  o.report["psi_degree"] = degree ? json(*degree) : json("not polynomial up to order 12");
  std::ostringstream s;
  s << "order " << check.order << " difference residual " << check.max_residual << " (tol " << tol
    << ")" << (check.ok() ? " ok" : " FAILED");
  o.summary = s.str();
  return o;
}

// --- simulate --------------------------------------------------------------

Outcome simulate(const ScenarioConfig& cfg, const Options& opt) {
  const FormsProblem problem = cfg.forms_problem();
  const double alpha = opt.tol.value_or(0.01);
  const std::uint64_t seed = opt.seed.value_or(cfg.mc.seed);
  const FormsSamples samples = sample_forms(problem, cfg.mc.n_samples, seed);
  const PermutationResult test =
      permutation_test(samples.first, samples.second, cfg.mc.n_perm, derive_seed(seed, 0xfeed));

  Outcome o;
  o.report["eq1_residual"] = with_tol(eq1_residual(problem, cfg.grid), kIdenticalTol);
  o.report["n_samples"] = cfg.mc.n_samples;
  o.report["n_perm"] = cfg.mc.n_perm;
  o.report["seed"] = seed;
  o.report["energy_statistic"] = test.statistic;
  o.report["p_value"] = with_tol(test.p_value, alpha);
  o.report["rejects_identical_distribution"] = test.p_value < alpha;
  std::ostringstream s;
  s << "energy " << test.statistic << ", p = " << test.p_value
    << (test.p_value < alpha ? " (reject)" : " (no rejection)");
  o.summary = s.str();
  return o;
}

// --- z2 ----------------------------------------------------------------------

Outcome z2_command(const ScenarioConfig& cfg, const Options& opt) {
  const std::string mode = opt.z2_mode.value_or(cfg.z2.mode);
  const std::size_t n_max = opt.z2_n.value_or(cfg.z2.n_max);
  std::vector<z2::Rational> q_grid = cfg.z2.q_grid;
  Outcome o;
  o.report["mode"] = mode;
  o.report["n_max"] = n_max;

  if (mode == "proposition") {
    if (q_grid.empty()) q_grid = {z2::Rational(0), z2::Rational(1, 4), z2::Rational(1, 3), z2::Rational(1)};
    for (const auto& q : q_grid) {
      if (q == z2::Rational(1, 2)) {
        throw cfg.error_at("/z2/q_grid", "proposition mode needs non-vanishing laws (no 1/2)");
      }
    }
    const auto rep = z2::proposition_check(n_max, q_grid);
    o.report["problems"] = rep.problems;
    o.report["identically_distributed"] = rep.identically_distributed;
    o.report["checked"] = rep.checked;
    o.report["violations"] = rep.violations.size();
    json list = json::array();
    for (const auto& w : rep.violations) list.push_back({{"problem", to_json(w.problem)}, {"index", w.index}});
    o.report["violation_list"] = list;
    o.summary = std::to_string(rep.violations.size()) + " violations";
  } else if (mode == "counterexample") {
    if (q_grid.empty()) {
      q_grid = {z2::Rational(0), z2::Rational(1, 4), z2::Rational(1, 3), z2::Rational(1, 2),
                z2::Rational(1)};
    }
    const auto witnesses = z2::counterexample_search(n_max, q_grid);
    bool all_vanishing = true;
    json list = json::array();
    for (const auto& w : witnesses) {
      bool vanishing = false;
      for (const auto& d : w.problem.dists) vanishing = vanishing || d.q == z2::Rational(1, 2);
      all_vanishing = all_vanishing && vanishing;
      list.push_back({{"problem", to_json(w.problem)}, {"index", w.index}});
    }
    o.report["witnesses"] = witnesses.size();
    o.report["all_have_vanishing_component"] = all_vanishing;
    o.report["witness_list"] = list;
    o.summary = std::to_string(witnesses.size()) + " witnesses";
  } else {
    throw ConfigError("--mode must be 'proposition' or 'counterexample'");
  }
  json q = json::array();
  for (const auto& r : q_grid) q.push_back(z2::format_rational(r));
  o.report["q_grid"] = q;
  return o;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ConfigError(path + ": cannot open output file");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rz2: characterization toolkit for R x Z(2)", "rz2"};
  app.require_subcommand(1, 1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opt.config_path, "Scenario config (JSON)");
    if (config_required) c->required();
    sub->add_option("--out", opt.out_path, "Output file (default: stdout)");
    sub->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", opt.seed, "Random seed override");
    sub->add_option("--tol", opt.tol, "Tolerance override");
  };

  struct Entry {
    const char* name;
    const char* help;
    Outcome (*fn)(const ScenarioConfig&, const Options&);
  };
  const Entry entries[] = {
      {"check-theta", "Probability membership, kappa bound and fiber densities", check_theta},
      {"verify-eq1", "Residual of the characteristic-function equation", verify_eq1},
      {"classify", "Class guarantees for each variable", classify},
      {"fd-verify", "Finite-difference elimination residuals", fd_verify},
      {"simulate", "Monte Carlo permutation energy test", simulate},
      {"heyde", "Build L3 = L1, L4 = -L2 and classify", heyde},
      {"ds", "Build the independence scenario and classify", ds},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, true);
    sub->callback([&opt, name = e.name] { opt.command = name; });
  }
  auto* z2sub = app.add_subcommand("z2", "Exact checks on Z(2)");
  add_common(z2sub, false);
  z2sub->add_option("--mode", opt.z2_mode, "proposition or counterexample")
      ->check(CLI::IsMember({"proposition", "counterexample"}));
  z2sub->add_option("--n", opt.z2_n, "Largest number of variables");
  z2sub->callback([&opt] { opt.command = "z2"; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "rz2: " << e.what() << '\n';
    return kConfigError;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    ScenarioConfig cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);

    Outcome outcome;
    if (opt.command == "z2") {
      outcome = z2_command(cfg, opt);
    } else {
      for (const auto& e : entries) {
        if (opt.command == e.name) outcome = e.fn(cfg, opt);
      }
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    json report;
    report["command"] = opt.command;
    report["config"] = cli::to_json(cfg);
    for (auto& [key, value] : outcome.report.items()) report[key] = value;
    report["summary"] = outcome.summary;
    report["timing_ms"] = ms;

    if (opt.format == "csv" && outcome.csv.empty()) {
      throw ConfigError("--format csv is not available for " + opt.command);
    }
    const std::string payload = opt.format == "csv" ? outcome.csv : report.dump(2) + "\n";
    if (opt.out_path.empty()) {
      out << payload;
    } else {
      write_text(opt.out_path, payload);
      out << outcome.summary << '\n';
    }
    return outcome.code;
  } catch (const ConfigError& e) {
    err << "rz2: " << e.what() << '\n';
    return kConfigError;
  } catch (const PreconditionError& e) {
    err << "rz2: precondition failed: " << e.what() << '\n';
    return kPrecondition;
  } catch (const AtomicFiberError& e) {
    err << "rz2: precondition failed: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::invalid_argument& e) {
    err << "rz2: invalid input: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace rz2::cli
