#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "xyzbethe/bae_solver.hpp"
#include "xyzbethe/expr.hpp"
#include "xyzbethe/homotopy.hpp"
#include "xyzbethe/io.hpp"
#include "xyzbethe/lattice_model.hpp"
#include "xyzbethe/tq_verify.hpp"
#include "xyzbethe/xxz_limit.hpp"

namespace xyzbethe::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Preset {
  const char* name;
  const char* what;
  bool xxz;
  int n;
  const char* tau;
  const char* eta;  // gamma for the XXZ presets
};

constexpr Preset kPresets[] = {
    {"table1-left", "N=4, tau=0.6i, eta=pi/10", false, 4, "0.6i", "pi/10"},
    {"table1-right", "N=4, tau=0.6i, eta=i pi/10", false, 4, "0.6i", "i*pi/10"},
    {"table1-1", "N=4, tau=0.4+0.6i, eta=1/e+i pi/10", false, 4, "0.4+0.6i", "1/e+i*pi/10"},
    {"table3", "N=6, tau=1.8i, eta=pi/(5e)", false, 6, "1.8i", "pi/(5e)"},
    {"table4", "N=6, tau=0.4+0.6i, eta=1/e+i pi/10", false, 6, "0.4+0.6i", "1/e+i*pi/10"},
    {"table5-left", "N=4, tau=1.8i, eta=pi/10", false, 4, "1.8i", "pi/10"},
    {"table5-right", "XXZ N=4, gamma=i pi^2/10", true, 4, "", "i*pi^2/10"},
    {"table6-left", "N=4, tau=0.4+1.8i, eta=1/e+i pi/10", false, 4, "0.4+1.8i", "1/e+i*pi/10"},
    {"table6-right", "XXZ N=4, gamma=i pi (1/e+i pi/10)", true, 4, "", "i*pi*(1/e+i*pi/10)"},
};

const Preset* find_preset(const std::string& name) {
  for (const auto& p : kPresets)
    if (name == p.name) return &p;
  return nullptr;
}

// Flag values as typed on the command line or read from the config file.
class Values {
 public:
  std::map<std::string, std::string> raw;
  bool require_complete_flag = false;

  bool has(const std::string& k) const { return raw.count(k) && !raw.at(k).empty(); }
  const std::string& str(const std::string& k) const { return raw.at(k); }

  cplx complex(const std::string& k) const { return parse_complex(need(k)); }
  std::optional<cplx> complex_opt(const std::string& k) const {
    if (!has(k)) return std::nullopt;
    return parse_complex(str(k));
  }
  double real(const std::string& k, double fallback) const {
    if (!has(k)) return fallback;
    const cplx z = parse_complex(str(k));
    if (z.imag() != 0.0) throw UsageError("--" + k + " must be real");
    return z.real();
  }
  long integer(const std::string& k, long fallback) const {
    if (!has(k)) return fallback;
    const double x = real(k, 0.0);
    if (x != std::round(x) || std::abs(x) > 1e15) throw UsageError("--" + k + " must be an integer");
    return static_cast<long>(x);
  }
  bool flag(const std::string& k) const {
    if (k == "require-complete" && require_complete_flag) return true;
    if (!has(k)) return false;
    std::string v = str(k);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw UsageError("--" + k + " expects a boolean");
  }
  const std::string& need(const std::string& k) const {
    if (!has(k)) throw UsageError("--" + k + " is required");
    return str(k);
  }
};

struct Command {
  CLI::App* app;
  std::vector<std::string> keys;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw UsageError("cannot write '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

ModelParams model_from(const Values& v, const Preset* preset = nullptr) {
  ModelParams p;
  p.n_sites = static_cast<int>(v.integer("n", preset ? preset->n : 0));
  if (!v.has("n") && !preset) throw UsageError("--n is required");
  p.tau = v.has("tau") || !preset ? v.complex("tau") : parse_complex(preset->tau);
  p.eta = v.has("eta") || !preset ? v.complex("eta") : parse_complex(preset->eta);
  p.validate();
  return p;
}

XXZParams xxz_from(const Values& v, const Preset* preset = nullptr) {
  XXZParams p;
  p.n_sites = static_cast<int>(v.integer("n", preset ? preset->n : 0));
  if (!v.has("n") && !preset) throw UsageError("--n is required");
  if (v.has("gamma"))
    p.gamma = v.complex("gamma");
  else if (v.has("eta"))
    p.gamma = cplx(0.0, kPi) * v.complex("eta");
  else if (preset)
    p.gamma = parse_complex(preset->eta);
  else
    throw UsageError("--gamma (or --eta, with gamma = i pi eta) is required");
  p.validate();
  return p;
}

SolverConfig solver_from(const Values& v) {
  SolverConfig c;
  c.beta_range = static_cast<int>(v.integer("beta-range", -1));
  c.n_starts = static_cast<int>(v.integer("starts", 0));
  const long seed = v.integer("seed", static_cast<long>(c.rng_seed));
  if (seed < 0) throw UsageError("--seed must be non-negative");
  c.rng_seed = static_cast<std::uint64_t>(seed);
  c.newton_tol = v.real("tol", c.newton_tol);
  const long hw = std::max(1u, std::thread::hardware_concurrency());
  c.threads = static_cast<int>(v.integer("threads", hw));
  return c;
}

std::string format_of(const Values& v, const char* fallback) {
  const std::string f = v.has("format") ? v.str("format") : fallback;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

std::pair<int, int> m_range(const Values& v, int num_roots) {
  if (!v.has("m-range")) return {0, num_roots};
  const std::string s = v.str("m-range");
  const auto dots = s.find("..");
  auto to_int = [&](const std::string& t) {
    int out = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc{} || end != t.data() + t.size()) throw UsageError("--m-range expects lo..hi integers");
    return out;
  };
  const int lo = to_int(dots == std::string::npos ? s : s.substr(0, dots));
  const int hi = dots == std::string::npos ? lo : to_int(s.substr(dots + 2));
  if (lo < 0 || hi < lo || hi > num_roots) throw UsageError("--m-range must satisfy 0 <= lo <= hi <= M");
  return {lo, hi};
}

// "0.9194+tau/2" when lambda sits on a half-period line, "a+bi" otherwise.
std::string lattice_label(cplx lambda, cplx tau) {
  const double b = lambda.imag() / tau.imag();
  for (int sgn : {1, -1}) {
    if (std::abs(b - 0.5 * sgn) < 1e-6) {
      const cplx rest = lambda - 0.5 * sgn * tau;
      std::string head = std::abs(rest.imag()) < 5e-5 ? fmt("%.4f", std::abs(rest.real()) < 5e-5 ? 0.0 : rest.real())
                                                       : io::format_complex(rest);
      return head + (sgn > 0 ? "+tau/2" : "-tau/2");
    }
  }
  return io::format_complex(lambda);
}

std::string table_csv(std::span<const BetheSolution> sols, cplx tau) {
  std::size_t m = 0;
  for (const auto& s : sols) m = std::max(m, s.roots.size());
  std::ostringstream os;
  for (std::size_t j = 1; j <= m; ++j) os << "lambda_" << j << ',';
  os << "beta,E\n";
  for (const auto& s : sols) {
    for (std::size_t j = 0; j < m; ++j) os << (j < s.roots.size() ? lattice_label(s.roots[j], tau) : "") << ',';
    os << s.beta << ',' << io::format_complex(s.energy) << '\n';
  }
  return os.str();
}

std::string match_csv(const MatchReport& r) {
  std::ostringstream os;
  os << "solution,spectrum,energy_gap,lambda_gap\n";
  for (const auto& p : r.pairs) os << p.solution << ',' << p.spectrum << ',' << p.energy_gap << ',' << p.lambda_gap << '\n';
  for (auto i : r.unmatched_solutions) os << i << ",,,\n";
  for (auto j : r.unmatched_spectrum) os << ',' << j << ",,\n";
  return os.str();
}

void print_match(const MatchReport& r, std::size_t ns, std::size_t ne, std::ostream& err) {
  err << "completeness: " << (r.complete ? "complete" : "INCOMPLETE") << ", " << r.pairs.size() << " pairs, "
      << ns << " solutions, " << ne << " eigenvalues, max energy gap " << fmt("%.3g", r.max_energy_gap)
      << ", max Lambda gap " << fmt("%.3g", r.max_lambda_gap) << '\n';
}

// Either to the --out files or to stdout in the chosen format.
void emit(const Values& v, const char* default_format, const std::string& json, const std::string& csv,
          std::ostream& out, const std::string& suffix = "") {
  const std::string f = format_of(v, default_format);
  if (v.has("out")) {
    write_file(v.str("out") + suffix + ".json", json);
    if (!csv.empty()) write_file(v.str("out") + suffix + ".csv", csv);
  } else {
    out << (f == "json" || csv.empty() ? json : csv);
  }
}

int solve_xyz(const Values& v, const Preset* preset, std::ostream& out, std::ostream& err, bool table_layout) {
  const ModelParams params = model_from(v, preset);
  const SolverConfig cfg = solver_from(v);
  cfg.validate(params.num_roots());
  const SolveResult res = multi_start_solve(params, cfg);
  long singular = 0, bad = 0;
  for (const auto& s : res.solutions) {
    if (s.kind == SolutionKind::Singular) ++singular;
    if (!(s.sum_defect < 1e-8) || s.p != s.beta) ++bad;
  }
  const long states = 1L << params.n_sites;
  err << "solve-xyz: N=" << params.n_sites << " M=" << params.num_roots() << ": " << res.solutions.size()
      << " solutions (" << singular << " singular) for " << states << " states; " << res.stats.seeds << " seeds, "
      << res.stats.converged << " converged, " << res.stats.duplicates << " duplicates\n";
  err << "sum rule p = beta: " << (bad == 0 ? "holds for every solution" : std::to_string(bad) + " violations")
      << '\n';

  const std::string csv = table_layout ? table_csv(res.solutions, params.tau) : io::solutions_to_csv(res.solutions);
  emit(v, "csv", io::solutions_to_json(res.solutions), csv, out);

  bool complete = true;
  if (v.flag("require-complete")) {
    const auto probes = default_lambda_probes();
    const auto spec = exact_spectrum(params, probes);
    const MatchReport rep = match_spectrum(res.solutions, spec, XyzModel(params));
    print_match(rep, res.solutions.size(), spec.size(), err);
    if (v.has("out")) write_file(v.str("out") + "_match.json", io::match_report_to_json(rep));
    complete = rep.complete;
  }
  return bad == 0 && complete ? kExitOk : kExitVerification;
}

bool xxz_invariants_hold(const XXZSolution& s, const XXZParams& p) {
  const int expected = s.phantom_side == PhantomSide::PlusInfinity    ? -s.phantom_count
                       : s.phantom_side == PhantomSide::MinusInfinity ? s.phantom_count
                                                                      : 0;
  if (s.beta != expected) return false;
  try {
    return asymptotic_beta_check(s, p);
  } catch (const FitFailure&) {
    return false;
  }
}

int solve_xxz(const Values& v, const Preset* preset, std::ostream& out, std::ostream& err) {
  const XXZParams params = xxz_from(v, preset);
  const SolverConfig cfg = solver_from(v);
  cfg.validate(params.num_roots());
  const auto [lo, hi] = m_range(v, params.num_roots());
  const XXZSolveResult res = xxz_solve(params, cfg, {lo, hi});
  long bad = 0, singular = 0;
  for (const auto& s : res.solutions) {
    if (s.singular) ++singular;
    if (!xxz_invariants_hold(s, params)) ++bad;
  }
  err << "solve-xxz: N=" << params.n_sites << " m in " << lo << ".." << hi << ": " << res.solutions.size()
      << " solutions (" << singular << " singular) for " << (1L << params.n_sites) << " states\n";
  err << "beta +- m = 0 and large-u asymptotics: "
      << (bad == 0 ? "hold for every solution" : std::to_string(bad) + " violations") << '\n';
  emit(v, "csv", io::xxz_solutions_to_json(res.solutions),
       io::xxz_solutions_to_csv(res.solutions, params.num_roots()), out);

  bool complete = true;
  if (v.flag("require-complete")) {
    const auto probes = default_lambda_probes();
    const auto spec = xxz_exact_spectrum(params, probes);
    const MatchReport rep = xxz_match_spectrum(res.solutions, spec, params);
    print_match(rep, res.solutions.size(), spec.size(), err);
    if (v.has("out")) write_file(v.str("out") + "_match.json", io::match_report_to_json(rep));
    complete = rep.complete;
  }
  return bad == 0 && complete ? kExitOk : kExitVerification;
}

int diag(const Values& v, std::ostream& out, std::ostream& err) {
  const auto probes = default_lambda_probes();
  std::vector<SpectrumEntry> spec;
  if (v.has("gamma")) {
    const XXZParams p = xxz_from(v);
    spec = xxz_exact_spectrum(p, probes);
  } else {
    spec = exact_spectrum(model_from(v), probes);
  }
  long tagged = 0;
  for (const auto& e : spec)
    if (e.degeneracy_tag) ++tagged;
  err << "diag: " << spec.size() << " eigenvalues, " << tagged << " in unresolved degenerate clusters\n";
  emit(v, "csv", io::spectrum_to_json(spec), io::spectrum_to_csv(spec), out);
  return kExitOk;
}

int verify(const Values& v, const std::string& path, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(path);
  MatchOptions mo;
  mo.energy_tol = mo.lambda_tol = v.real("tol", 1e-6);
  if (!(mo.energy_tol > 0)) throw UsageError("--tol must be positive");
  const auto probes = default_lambda_probes();
  MatchReport rep;
  std::size_t ns = 0, ne = 0;
  if (io::looks_like_xxz(text)) {
    const XXZParams p = xxz_from(v);
    const auto sols = io::xxz_solutions_from_json(text);
    const auto spec = xxz_exact_spectrum(p, probes);
    rep = xxz_match_spectrum(sols, spec, p, mo);
    ns = sols.size();
    ne = spec.size();
  } else {
    const ModelParams p = model_from(v);
    const XyzModel model(p);
    auto sols = io::solutions_from_json(text);
    for (const auto& s : sols)
      if (static_cast<int>(s.roots.size()) != p.num_roots())
        throw UsageError("solutions in '" + path + "' do not have M = N/2 roots");
    // Newton refinement from the stored roots; a solution that does not
    // reconverge is kept as stored and left to the matching to judge.
    SolverConfig cfg = solver_from(v);
    cfg.newton_tol = std::min(1e-12, 1e-3 * mo.energy_tol);
    long refined = 0;
    for (auto& s : sols) {
      const NewtonOutcome o = s.kind == SolutionKind::Singular ? newton_solve_singular(s.nu_roots, s.beta, model, cfg)
                                                               : newton_solve(s.roots, s.beta, model, cfg);
      if (o.converged()) {
        s = *o.solution;
        ++refined;
      }
    }
    err << "verify: refined " << refined << " of " << sols.size() << " solutions\n";
    const auto spec = exact_spectrum(p, probes);
    rep = match_spectrum(sols, spec, model, mo);
    ns = sols.size();
    ne = spec.size();
  }
  print_match(rep, ns, ne, err);
  emit(v, "json", io::match_report_to_json(rep), match_csv(rep), out, "_match");
  return rep.complete ? kExitOk : kExitVerification;
}

int limit_scan(const Values& v, std::ostream& out, std::ostream& err) {
  const ModelParams params = model_from(v);
  const SolverConfig cfg = solver_from(v);
  cfg.validate(params.num_roots());
  HomotopyOptions opts;
  opts.target_im_tau = v.real("target", opts.target_im_tau);
  opts.steps = static_cast<int>(v.integer("steps", 0));
  if (opts.steps < 0) throw UsageError("--steps must be >= 0");
  if (opts.target_im_tau < params.tau.imag()) throw UsageError("--target must not be below Im tau");
  opts.newton = cfg;
  const SolveResult starts = multi_start_solve(params, cfg);
  std::vector<XXZSolution> limit;
  if (std::abs(opts.target_im_tau - params.tau.imag()) > 1e-12 * params.tau.imag())
    limit = xxz_solve(xxz_limit_of(params), cfg).solutions;
  const CorrespondenceReport rep = homotopy_correspondence(params, starts.solutions, limit, opts);
  long lost = 0;
  for (const auto& p : rep.paths)
    if (p.lost) ++lost;
  err << "limit-scan: " << rep.paths.size() << " paths to Im tau = " << opts.target_im_tau << ", "
      << rep.pairs.size() << " paired" << (rep.trivial ? " (identity)" : " with " + std::to_string(limit.size()) + " XXZ solutions")
      << ", " << lost << " lost, " << rep.warnings.size() << " warnings, "
      << (rep.complete ? "complete" : "INCOMPLETE") << '\n';
  const std::string json = io::correspondence_to_json(rep);
  if (v.has("out")) {
    const std::string base = v.str("out");
    write_file(base + "_paths.csv", io::path_log_csv(rep));
    write_file(base + "_correspondence.json", json);
    write_file(base + "_trajectories.svg", io::trajectory_svg(rep));
  } else {
    out << (format_of(v, "json") == "csv" ? io::path_log_csv(rep) : json);
  }
  return rep.complete ? kExitOk : kExitVerification;
}

int export_table(const Values& v, std::ostream& out, std::ostream& err) {
  const std::string name = v.need("table");
  const Preset* preset = find_preset(name);
  if (!preset) {
    std::string known;
    for (const auto& p : kPresets) known += std::string(" ") + p.name;
    throw UsageError("unknown table '" + name + "'; known:" + known);
  }
  err << "export-table " << preset->name << ": " << preset->what << '\n';
  return preset->xxz ? solve_xxz(v, preset, out, err) : solve_xyz(v, preset, out, err, true);
}

// Bad input rather than a failed computation.
bool is_usage_error(const Error& e) {
  return dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ExpressionError*>(&e) ||
         dynamic_cast<const io::FormatError*>(&e) || dynamic_cast<const InvalidParameters*>(&e) ||
         dynamic_cast<const DimensionTooLarge*>(&e) || dynamic_cast<const DegenerateEta*>(&e) ||
         dynamic_cast<const DegenerateGamma*>(&e);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bethe ansatz solver and verifier for the periodic XYZ and XXZ chains", "xyzbethe"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  Values v;
  std::string config_path;
  std::string verify_path;

  const std::vector<std::string> model_keys{"n", "tau", "eta"};
  const std::vector<std::string> solver_keys{"beta-range", "starts", "seed", "tol", "threads"};
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  std::vector<Command> commands{
      {app.add_subcommand("solve-xyz", "Solve the elliptic Bethe equations"),
       with(with(model_keys, solver_keys), {"out", "format", "require-complete"})},
      {app.add_subcommand("solve-xxz", "Solve the XXZ Bethe equations including phantom roots"),
       with({"n", "gamma", "eta", "m-range"}, with(solver_keys, {"out", "format", "require-complete"}))},
      {app.add_subcommand("diag", "Exact diagonalisation spectrum (XXZ when --gamma is given)"),
       {"n", "tau", "eta", "gamma", "out", "format"}},
      {app.add_subcommand("verify", "Match a solutions file against the exact spectrum"),
       with({"n", "tau", "eta", "gamma"}, with(solver_keys, {"out", "format"}))},
      {app.add_subcommand("limit-scan", "Continue every solution towards the XXZ limit and pair the end points"),
       with(with(model_keys, solver_keys), {"target", "steps", "out", "format"})},
      {app.add_subcommand("export-table", "Recompute a published table from its parameters"),
       with({"table", "n", "tau", "eta", "gamma", "m-range"}, with(solver_keys, {"out", "format", "require-complete"}))},
  };
  static const std::map<std::string, std::string> help{
      {"n", "Chain length N (even)"},
      {"tau", "Modular parameter, e.g. 0.4+0.6i"},
      {"eta", "Crossing parameter, e.g. pi/10 or 1/e+i*pi/10"},
      {"gamma", "XXZ anisotropy, e.g. i*pi^2/10"},
      {"beta-range", "Scan beta in [-B, B] (default M)"},
      {"starts", "Starts per beta (default 64 + 112 M^2)"},
      {"seed", "RNG seed"},
      {"tol", "Newton tolerance; matching tolerance for verify"},
      {"threads", "Worker threads"},
      {"out", "Output prefix; files get .json/.csv (and _match, _paths, ... suffixes)"},
      {"format", "stdout format: json or csv"},
      {"m-range", "Phantom counts, lo..hi"},
      {"target", "Final Im tau (default 12)"},
      {"steps", "Fixed number of geometric steps (default adaptive)"},
      {"table", "table1-left, table1-right, table1-1, table3, table4, table5-left, table5-right, table6-left, table6-right"},
  };
  for (auto& c : commands) {
    c.app->add_option("--config", config_path, "Flat key=value file; flags override it");
    for (const auto& k : c.keys) {
      if (k == "require-complete")
        c.app->add_flag("--require-complete", v.require_complete_flag, "Exit 3 unless the spectrum is fully matched");
      else
        c.app->add_option("--" + k, v.raw[k], help.at(k));
    }
  }
  commands[3].app->add_option("solutions", verify_path, "Solutions JSON written by solve-xyz or solve-xxz")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands)
    if (c.app->parsed()) cmd = &c;

  try {
    if (!config_path.empty()) {
      for (const auto& [k, val] : load_config_file(config_path)) {
        if (std::find(cmd->keys.begin(), cmd->keys.end(), k) == cmd->keys.end())
          throw UsageError("config key '" + k + "' does not apply to " + cmd->app->get_name());
        if (cmd->app->count("--" + k) == 0) v.raw[k] = val;
      }
    }
    const std::string name = cmd->app->get_name();
    if (name == "solve-xyz") return solve_xyz(v, nullptr, out, err, false);
    if (name == "solve-xxz") return solve_xxz(v, nullptr, out, err);
    if (name == "diag") return diag(v, out, err);
    if (name == "verify") return verify(v, verify_path, out, err);
    if (name == "limit-scan") return limit_scan(v, out, err);
    return export_table(v, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const Error& e) {
    if (is_usage_error(e)) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    err << "failure: " << e.what() << '\n';
    return kExitVerification;
  }
}

}  // namespace xyzbethe::cli
