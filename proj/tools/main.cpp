// Command-line front end: stability functions, kernel tables, charge-form
// evaluations, the instability scan, and the cutoff-renormalisation check.
// Every run prints its resolved configuration so outputs are reproducible.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fermistab/errors.hpp"
#include "fermistab/nbody.hpp"
#include "fermistab/partial_wave.hpp"
#include "fermistab/stability.hpp"
#include "fermistab/trials.hpp"

namespace {

using namespace fermistab;

struct RunConfig {
  std::string output_path;  // empty = stdout
  std::uint64_t seed = 0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;

  QuadratureConfig quad() const {
    QuadratureConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    return cfg;
  }
};

void emit(const RunConfig& run, const std::string& text) {
  if (run.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(run.output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + run.output_path);
  out << text;
}

std::string config_comment(const std::string& sub, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostringstream os;
  os << "# fermi-stability " << sub;
  for (const auto& [k, v] : kv) os << ' ' << k << '=' << v;
  os << '\n';
  return os.str();
}

std::string config_json(const std::string& sub,
                        const std::vector<std::pair<std::string, std::string>>& kv) {
  nlohmann::ordered_json j;
  j["command"] = sub;
  for (const auto& [k, v] : kv) j[k] = v;
  return j.dump();
}

std::vector<double> parse_list(const std::string& text) {
  // "a,b,c" or "start:stop:step"
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start, stop, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0)
      throw DomainError("grid must be start:stop:step with step > 0");
    for (double v = start; v <= stop + 1e-12 * step; v += step) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

PartialWaveCharge make_charge(const std::string& spec, int l, int m_z) {
  if (spec.rfind("q-gamma:", 0) == 0) {
    const double gamma = std::stod(spec.substr(8));
    TrialParams p;
    p.gamma = gamma;
    p.beta = 0.5;
    return trial_charge_q(p);
  }
  if (spec == "gauss-l1") {
    auto g = [](double p) { return p * std::exp(-p * p); };
    return PartialWaveCharge{1, 0, RadialFunction::from_function(LogGrid(-12.0, 6.0, 4096), g)};
  }
  // Two-column CSV p,g(p); resampled in log p onto a 4096-point grid.
  std::ifstream in(spec);
  if (!in) throw DomainError("charge file not found: " + spec);
  std::vector<double> xs, gs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double p, g;
    if (std::sscanf(line.c_str(), "%lf,%lf", &p, &g) == 2) {
      if (!(p > 0.0)) throw DomainError("charge file momenta must be > 0");
      xs.push_back(std::log(p));
      gs.push_back(g);
    }
  }
  if (xs.size() < 2) throw DomainError("charge file needs at least two rows p,g");
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw DomainError("charge file momenta must be increasing");
  LogGrid grid(xs.front(), xs.back(), 4096);
  std::vector<double> values(grid.n_points);
  size_t j = 0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    while (j + 2 < xs.size() && xs[j + 1] < x) ++j;
    const double t = (x - xs[j]) / (xs[j + 1] - xs[j]);
    values[i] = gs[j] + t * (gs[j + 1] - gs[j]);
  }
  return PartialWaveCharge{l, m_z, RadialFunction::from_samples(grid, values)};
}

std::string fmt(double v) { return format_g17(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability analysis for N fermions plus a distinct particle with zero-range interactions"};
  app.require_subcommand(1);

  RunConfig run;
  app.add_option("--output", run.output_path, "Write the artifact to a file instead of stdout");
  app.add_option("--seed", run.seed, "Random seed for Monte Carlo runs")->capture_default_str();
  app.add_option("--rel-tol", run.rel_tol, "Quadrature relative tolerance")->capture_default_str();
  app.add_option("--abs-tol", run.abs_tol, "Quadrature absolute floor")->capture_default_str();

  // critical-mass
  auto* cm = app.add_subcommand("critical-mass", "Critical mass m*(N), the root of Lambda(m,N) = 1");
  int cm_n = 2;
  double cm_tol = 1e-10;
  cm->add_option("--n", cm_n, "Fermion count N")->required()->check(CLI::Range(2, 1000000));
  cm->add_option("--tol", cm_tol, "Root bracket tolerance")->capture_default_str();

  // lambda
  auto* lam = app.add_subcommand("lambda", "Stability functions Lambda, Gamma and the proven regime");
  double lam_m = 1.0;
  int lam_n = 2;
  lam->add_option("--m", lam_m, "Mass ratio m")->required()->check(CLI::PositiveNumber);
  lam->add_option("--n", lam_n, "Fermion count N")->required()->check(CLI::Range(2, 1000000));

  // kernel
  auto* ker = app.add_subcommand("kernel", "Tabulate S_l(k) to CSV");
  int ker_l = 0, ker_n = 2, ker_steps = 81;
  double ker_m = 1.0, ker_kmax = 20.0;
  ker->add_option("--l", ker_l, "Angular momentum l")->required()->check(CLI::NonNegativeNumber);
  ker->add_option("--m", ker_m, "Mass ratio m")->required()->check(CLI::PositiveNumber);
  ker->add_option("--n", ker_n, "Fermion count N")->required()->check(CLI::Range(2, 1000000));
  ker->add_option("--k-max", ker_kmax, "Largest k")->required()->check(CLI::PositiveNumber);
  ker->add_option("--steps", ker_steps, "Number of k points")->required()->check(CLI::Range(2, 1000000));

  // form two-body | slater-mc
  auto* form = app.add_subcommand("form", "Charge-form evaluations");
  form->require_subcommand(1);
  auto* two = form->add_subcommand("two-body", "Exact N = 2 charge form on a named or file charge");
  double two_m = 1.0, two_alpha = 0.0, two_lambda = 1.0;
  std::string two_charge;
  int two_l = 1, two_mz = 0;
  two->add_option("--m", two_m, "Mass ratio m")->required()->check(CLI::PositiveNumber);
  two->add_option("--alpha", two_alpha, "Contact coupling alpha")->capture_default_str();
  two->add_option("--lambda", two_lambda, "Spectral shift lambda")->check(CLI::PositiveNumber)->capture_default_str();
  two->add_option("--charge", two_charge, "q-gamma:<g>, gauss-l1, or a CSV file p,g")->required();
  two->add_option("--l", two_l, "Channel l for file charges")->capture_default_str();
  two->add_option("--mz", two_mz, "Channel m_z for file charges")->capture_default_str();

  auto* slater = form->add_subcommand("slater-mc", "Monte Carlo N = 3 charge form on the Slater trial charge");
  double sl_m = 0.05, sl_gamma = 0.25, sl_beta = 0.25, sl_alpha = 0.0, sl_lambda = 1.0, sl_n = 1.0;
  int sl_nferm = 3;
  long long sl_samples = 10000000;
  slater->add_option("--m", sl_m, "Mass ratio m")->required()->check(CLI::PositiveNumber);
  slater->add_option("--n-fermions", sl_nferm, "Fermion count (3)")->capture_default_str();
  slater->add_option("--n", sl_n, "Dilation parameter n")->required();
  slater->add_option("--gamma", sl_gamma, "Trial width gamma")->required();
  slater->add_option("--beta", sl_beta, "Bump scale beta")->required();
  slater->add_option("--samples", sl_samples, "Sample count")->capture_default_str();
  slater->add_option("--alpha", sl_alpha, "Contact coupling alpha")->capture_default_str();
  slater->add_option("--lambda", sl_lambda, "Spectral shift lambda")->check(CLI::PositiveNumber)->capture_default_str();
  std::optional<std::uint64_t> sl_seed;
  slater->add_option("--seed", sl_seed, "Seed override for this run");

  // instability scan
  auto* inst = app.add_subcommand("instability", "Trial-charge energy scans");
  inst->require_subcommand(1);
  auto* scan = inst->add_subcommand("scan", "Scan E(n) = F1[Q_{n,gamma}] over a (gamma, n) grid");
  double scan_m = 0.05;
  int scan_nferm = 2;
  std::string scan_gammas = "0.05:0.5:0.05", scan_ns = "1,2,4,8,16,32,64";
  scan->add_option("--m", scan_m, "Mass ratio m")->required()->check(CLI::PositiveNumber);
  scan->add_option("--n-fermions", scan_nferm, "Fermion count N")->capture_default_str();
  scan->add_option("--gamma-grid", scan_gammas, "Gamma grid, list or start:stop:step")->capture_default_str();
  scan->add_option("--n-list", scan_ns, "Dilation list")->capture_default_str();

  // renorm check
  auto* ren = app.add_subcommand("renorm", "Cutoff renormalisation checks");
  ren->require_subcommand(1);
  auto* check = ren->add_subcommand("check", "Residual of the ball integral of G_lambda against 4piR - L_lambda");
  std::string ren_rs = "100,1000,10000";
  double ren_m = 1.0, ren_lambda = 1.0, ren_alpha = 0.0;
  check->add_option("--r-list", ren_rs, "Cutoff radii")->capture_default_str();
  check->add_option("--m", ren_m, "Mass ratio m")->required()->check(CLI::PositiveNumber);
  check->add_option("--lambda", ren_lambda, "Spectral shift lambda")->required()->check(CLI::PositiveNumber);
  check->add_option("--alpha", ren_alpha, "Coupling used in mu(alpha,R)")->capture_default_str();

  try {
    app.parse(argc, argv);

    const QuadratureConfig quad = run.quad();
    const std::string tol_kv = "rel_tol=" + fmt(run.rel_tol) + " abs_tol=" + fmt(run.abs_tol);

    if (cm->parsed()) {
      const double m_star = critical_mass(cm_n, cm_tol);
      std::ostringstream os;
      os << config_comment("critical-mass", {{"n", std::to_string(cm_n)}, {"tol", fmt(cm_tol)}});
      os << "m_star=" << fmt(m_star) << '\n';
      emit(run, os.str());
    } else if (lam->parsed()) {
      const StabilityReport rep = classify(lam_m, lam_n);
      std::ostringstream os;
      os << config_comment("lambda", {{"m", fmt(lam_m)}, {"n", std::to_string(lam_n)}});
      os << "Lambda=" << fmt(rep.lambda_mn) << '\n'
         << "Gamma=" << fmt(rep.gamma_mn) << '\n'
         << "m_star_2=" << fmt(rep.m_star_2) << '\n'
         << "m_star_N=" << fmt(rep.m_star_n) << '\n'
         << "regime=" << to_string(rep.regime) << '\n';
      emit(run, os.str());
    } else if (ker->parsed()) {
      const KernelTable table = KernelTable::build(ker_l, ker_m, ker_n, ker_kmax, ker_steps, quad);
      std::ostringstream os;
      os << config_comment("kernel", {{"l", std::to_string(ker_l)},
                                      {"m", fmt(ker_m)},
                                      {"N", std::to_string(ker_n)},
                                      {"k_max", fmt(ker_kmax)},
                                      {"steps", std::to_string(ker_steps)},
                                      {"tols", tol_kv}});
      os << table.to_csv();
      emit(run, os.str());
    } else if (two->parsed()) {
      const PartialWaveCharge charge = make_charge(two_charge, two_l, two_mz);
      SystemParams params;
      params.m = two_m;
      params.n_fermions = 2;
      params.alpha = two_alpha;
      params.lambda = two_lambda;
      const FormBreakdown fb = phi_two_body(charge, params, quad);
      const std::string cfg = config_json(
          "form two-body", {{"m", fmt(two_m)}, {"alpha", fmt(two_alpha)},
                            {"lambda", fmt(two_lambda)}, {"charge", two_charge},
                            {"l", std::to_string(charge.l)}, {"mz", std::to_string(charge.m_z)},
                            {"tols", tol_kv}});
      emit(run, to_json_string(fb, cfg) + "\n");
    } else if (slater->parsed()) {
      const std::uint64_t seed = sl_seed.value_or(run.seed);
      TrialParams tp;
      tp.n = sl_n;
      tp.gamma = sl_gamma;
      tp.beta = sl_beta;
      const SlaterCharge xi = slater_charge(tp, sl_nferm);
      SystemParams params;
      params.m = sl_m;
      params.n_fermions = sl_nferm;
      params.alpha = sl_alpha;
      params.lambda = sl_lambda;
      const FormBreakdown fb = phi_slater_mc(xi, params, sl_samples, seed);
      const std::string cfg = config_json(
          "form slater-mc",
          {{"m", fmt(sl_m)}, {"n_fermions", std::to_string(sl_nferm)}, {"n", fmt(sl_n)},
           {"gamma", fmt(sl_gamma)}, {"beta", fmt(sl_beta)},
           {"samples", std::to_string(sl_samples)}, {"seed", std::to_string(seed)},
           {"alpha", fmt(sl_alpha)}, {"lambda", fmt(sl_lambda)}});
      emit(run, to_json_string(fb, cfg) + "\n");
    } else if (scan->parsed()) {
      const std::vector<double> gammas = parse_list(scan_gammas);
      const std::vector<double> ns = parse_list(scan_ns);
      std::vector<std::pair<double, ScanResult>> results;
      bool any_diverging = false, all_bounded = true;
      for (double g : gammas) {
        ScanResult r = instability_scan(scan_m, scan_nferm, g, ns, quad);
        any_diverging = any_diverging || r.verdict == ScanVerdict::Diverging;
        all_bounded = all_bounded && r.verdict == ScanVerdict::Bounded;
        results.emplace_back(g, std::move(r));
      }
      const char* overall = any_diverging ? "Diverging" : (all_bounded ? "Bounded" : "Inconclusive");
      std::ostringstream os;
      os << config_comment("instability scan",
                           {{"m", fmt(scan_m)}, {"n_fermions", std::to_string(scan_nferm)},
                            {"gamma_grid", scan_gammas}, {"n_list", scan_ns}, {"tols", tol_kv}});
      os << scan_to_csv(scan_m, scan_nferm, results);
      os << "# verdict=" << overall << '\n';
      emit(run, os.str());
    } else if (check->parsed()) {
      const std::vector<double> rs = parse_list(ren_rs);
      std::ostringstream os;
      os << config_comment("renorm check", {{"r_list", ren_rs}, {"m", fmt(ren_m)},
                                            {"lambda", fmt(ren_lambda)}, {"alpha", fmt(ren_alpha)},
                                            {"tols", tol_kv}});
      os << "R,integral,residual,mu\n";
      for (double R : rs) {
        const RenormResidual rr = cutoff_renorm_residual({Vec3{}}, R, ren_lambda, ren_m, ren_alpha, quad);
        os << fmt(R) << ',' << fmt(rr.integral) << ',' << fmt(rr.residual) << ',' << fmt(rr.mu)
           << '\n';
      }
      emit(run, os.str());
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
