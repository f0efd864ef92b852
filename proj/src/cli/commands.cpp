#include "dirsme/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "dirsme/cli/params.hpp"
#include "dirsme/efficiency.hpp"
#include "dirsme/errors.hpp"
#include "dirsme/manifold.hpp"
#include "dirsme/models.hpp"
#include "dirsme/samplers.hpp"

namespace dirsme::cli {

namespace {

Eigen::MatrixXd scalar(double x) { return Eigen::MatrixXd::Constant(1, 1, x); }

void add_w_diagnostics(FitReport& r, const MomentPair& mp) {
  r.w_condition = condition_number(mp);
  r.w_min_eigenvalue = check_pd(mp);
  r.w_threshold = pd_threshold(mp);
  if (r.w_condition > 1e8)
    r.warnings.push_back("W is ill-conditioned (condition number " +
                         format_number(r.w_condition) + "); estimates may be unstable");
  if (mp.n < 5L * mp.W.rows())
    r.warnings.push_back("only " + std::to_string(mp.n) + " observations for " +
                         std::to_string(mp.W.rows()) + " parameters");
}

void require_sphere(const Dataset& data, const std::string& model) {
  if (data.kind.geometry != Geometry::Sphere)
    throw ValidationError("model '" + model + "' needs sphere data, got " + kind_name(data.kind));
}

void require_estimator(const std::string& estimator, const std::string& model,
                       const std::string& supported) {
  if (estimator != supported)
    throw ValidationError("model '" + model + "' supports only --estimator " + supported);
}

std::vector<double> angles_of(const Eigen::MatrixXd& Z) {
  std::vector<double> theta(static_cast<std::size_t>(Z.rows()));
  for (Eigen::Index h = 0; h < Z.rows(); ++h) theta[h] = std::atan2(Z(h, 1), Z(h, 0));
  return theta;
}

std::string hint_for(const NumericalError& e) {
  if (dynamic_cast<const SingularW*>(&e))
    return "W is not positive definite: collect more observations, or fit a smaller model "
           "(the hybrid estimator needs fewer parameters than the full one)";
  if (const auto* z = dynamic_cast<const ZeroResultant*>(&e)) {
    std::string s = "the sample mean direction vanishes, so the orientation is unidentifiable";
    if (z->column() >= 0) s += " (torus column " + std::to_string(z->column() + 1) + ")";
    return s + "; for axial data try the bingham model";
  }
  if (dynamic_cast<const DegenerateConcentration*>(&e))
    return "all observations coincide; the concentration estimate is infinite";
  if (dynamic_cast<const NearDegenerate*>(&e))
    return "the data are too concentrated for the supported concentration range";
  if (dynamic_cast<const SamplerError*>(&e))
    return "the parameters are too extreme for the rejection sampler";
  return "the computation is numerically degenerate";
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  return f;
}

std::string provenance_line(const std::vector<std::string>& args,
                            std::optional<std::uint64_t> seed) {
  std::string s = std::string("# dirsme ") + kVersion;
  if (seed) s += " seed=" + std::to_string(*seed);
  s += " args:";
  for (const auto& a : args) s += " " + a;
  return s + "\n";
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_floating_point_v<T>) s += format_number(xs[i]);
    else s += std::to_string(xs[i]);
  }
  return s;
}

}  // namespace

FitReport fit_dataset(const Dataset& data, const std::string& model,
                      const std::string& estimator) {
  if (estimator != "hybrid" && estimator != "full")
    throw ValidationError("unknown estimator '" + estimator + "' (expected hybrid or full)");
  FitReport r;
  r.model = model;
  r.estimator = estimator + "-sme";
  r.kind = kind_name(data.kind);
  r.n = data.rows();
  const Eigen::MatrixXd& Z = data.values;
  const auto q = Z.cols();

  if (model == "vmf") {
    require_sphere(data, model);
    if (estimator == "full" && q == 2) {
      const auto theta = angles_of(Z);
      const MomentPair mp = circle_full_moments(theta);
      const CircleFit fit = vm_fit_full_circle(theta);
      r.orientation["theta0"] = scalar(fit.theta0);
      r.orientation["mu0"] =
          Eigen::Vector2d(std::cos(fit.theta0), std::sin(fit.theta0));
      r.concentration["kappa"] = scalar(fit.kappa);
      add_w_diagnostics(r, mp);
      return r;
    }
    const VmfFit fit = estimator == "hybrid" ? vmf_fit_hybrid(Z) : vmf_fit_full(Z);
    r.orientation["mu0"] = fit.mu0.coords();
    if (q == 2) r.orientation["theta0"] = scalar(wrap_angle(std::atan2(fit.mu0[1], fit.mu0[0])));
    r.concentration["kappa"] = scalar(fit.kappa);
    add_w_diagnostics(r, fit.moments);
    return r;
  }
  if (model == "bingham") {
    require_sphere(data, model);
    require_estimator(estimator, model, "hybrid");
    const BinghamFit fit = bingham_fit_hybrid(Z);
    r.orientation["G"] = fit.G;
    r.concentration["lambda"] = fit.lambda;
    add_w_diagnostics(r, fit.moments);
    return r;
  }
  if (model == "kent") {
    require_sphere(data, model);
    require_estimator(estimator, model, "hybrid");
    if (q != 3) throw ValidationError("model 'kent' needs sphere:3 data");
    const KentFit fit = kent_fit_hybrid(Z);
    r.orientation["Gamma"] = fit.Gamma;
    r.concentration["kappa"] = scalar(fit.kappa);
    r.concentration["beta"] = scalar(fit.beta);
    add_w_diagnostics(r, fit.moments);
    if (2.0 * std::abs(fit.beta) >= fit.kappa)
      r.warnings.push_back("2 beta >= kappa: the fitted Kent density is not unimodal");
    return r;
  }
  if (model == "fisher-bingham") {
    require_sphere(data, model);
    require_estimator(estimator, model, "full");
    const FisherBinghamFit fit = fb_fit_full(Z);
    r.concentration["b"] = fit.params.b;
    r.concentration["A"] = fit.params.A;
    add_w_diagnostics(r, fit.moments);
    return r;
  }
  if (model == "sine") {
    if (data.kind.geometry != Geometry::Torus)
      throw ValidationError("model 'sine' needs torus data, got " + kind_name(data.kind));
    require_estimator(estimator, model, "hybrid");
    const SineFit fit = sine_fit_hybrid(Z);
    r.orientation["theta0"] = fit.params.theta0;
    r.concentration["kappa"] = fit.params.kappa;
    r.concentration["Lambda"] = fit.params.Lambda;
    add_w_diagnostics(r, fit.moments);
    if ((fit.params.kappa.array() < 0.0).any())
      r.warnings.push_back("negative concentration estimate");
    return r;
  }
  throw ValidationError("unknown model '" + model +
                        "' (expected vmf, bingham, kent, fisher-bingham or sine)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Score matching estimation for directional data", "dirsme"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a model to a dataset and write a JSON report");
  std::string data_path, format = "unit-vectors", kind = "sphere", model, estimator = "hybrid",
                         report_path;
  bool degrees = false;
  fit->add_option("--data", data_path, "CSV dataset")->required();
  fit->add_option("--format", format, "unit-vectors | angles-radians | angles-degrees");
  fit->add_option("--kind", kind, "sphere[:q] | torus[:k]");
  fit->add_option("--model", model, "vmf | bingham | kent | fisher-bingham | sine")->required();
  fit->add_option("--estimator", estimator, "hybrid | full");
  fit->add_option("--out", report_path, "report file (default: stdout)");
  fit->add_flag("--degrees", degrees, "report angles in degrees");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw a dataset from a model");
  std::string sim_model, params_path, sim_out;
  long sim_n = 0;
  std::optional<std::uint64_t> sim_seed;
  std::uint64_t sim_stream = 0;
  sim->add_option("--model", sim_model, "vmf | bingham | kent | sine")->required();
  sim->add_option("--params", params_path, "key = value parameter file")->required();
  sim->add_option("--n", sim_n, "number of observations")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "master seed (default: random, printed)");
  sim->add_option("--stream", sim_stream, "substream id");
  sim->add_option("--out", sim_out, "output CSV")->required();

  // efficiency
  auto* eff = app.add_subcommand("efficiency", "Monte Carlo relative efficiency study");
  std::vector<double> kappas{0.5, 1.0, 2.0, 10.0};
  std::vector<long> ns{2, 10, 20, 100};
  long reps = 20000;
  std::uint64_t eff_seed = 20240101;
  int threads = 0;
  std::string eff_out, table_out;
  eff->add_option("--kappas", kappas, "concentrations")->delimiter(',');
  eff->add_option("--ns", ns, "sample sizes")->delimiter(',');
  eff->add_option("--reps", reps, "replicates per cell (>= 1000)");
  eff->add_option("--seed", eff_seed, "master seed");
  eff->add_option("--threads", threads, "worker threads (0: all cores)");
  eff->add_option("--out", eff_out, "long-format CSV")->required();
  eff->add_option("--table", table_out, "also write the kappa x n table as CSV");

  // are
  auto* are_cmd = app.add_subcommand("are", "Asymptotic relative efficiency curve");
  double kmin = 0.1, kmax = 50.0;
  int steps = 200;
  bool log_spacing = false;
  std::string are_out;
  are_cmd->add_option("--kmin", kmin, "smallest kappa");
  are_cmd->add_option("--kmax", kmax, "largest kappa");
  are_cmd->add_option("--steps", steps, "number of rows");
  are_cmd->add_flag("--log", log_spacing, "geometric spacing");
  are_cmd->add_option("--out", are_out, "output CSV (default: stdout)");

  // stokes-check
  auto* stokes = app.add_subcommand("stokes-check", "Quadrature check of Stokes' theorem on S_2");
  std::vector<std::string> pairs{"z1-z2", "z1-z1", "z1sq-z3"};
  int resolution = 128;
  double h = kFiniteDifferenceStep;
  stokes->add_option("--pair", pairs, "z1-z2 | z1-z1 | z1sq-z3 | exp-z1")->delimiter(',');
  stokes->add_option("--resolution", resolution, "theta cells")->check(CLI::PositiveNumber);
  stokes->add_option("--step", h, "finite-difference step");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*fit) {
      const Dataset data = parse_dataset_file(data_path, parse_format(format), parse_kind(kind));
      FitReport report = fit_dataset(data, model, estimator);
      report.provenance = {kVersion, args, std::nullopt};
      if (degrees) {
        report.angle_unit = "degrees";
        if (report.orientation.count("theta0"))
          report.orientation["theta0"] *= 180.0 / std::numbers::pi;
      }
      const std::string text = to_json(report);
      if (report_path.empty()) {
        out << text;
      } else {
        auto f = open_output(report_path);
        f << text;
      }
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      return kExitOk;
    }

    if (*sim) {
      if (!sim_seed) sim_seed = (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();
      const SeedSpec seed{*sim_seed, sim_stream};
      const ParamFile params = ParamFile::load(params_path);
      Dataset data;
      data.source = sim_out;
      if (sim_model == "vmf") {
        const VmfParams p = read_vmf_params(params);
        data.values = sample_vmf(p.mu0, p.kappa, sim_n, seed);
        data.kind = {Geometry::Sphere, p.mu0.dim()};
      } else if (sim_model == "bingham") {
        data.values = sample_bingham(read_bingham_params(params), sim_n, seed);
        data.kind = {Geometry::Sphere, static_cast<int>(data.values.cols())};
      } else if (sim_model == "kent") {
        data.values = sample_kent(read_kent_params(params), sim_n, seed);
        data.kind = {Geometry::Sphere, 3};
      } else if (sim_model == "sine") {
        const SineModelParams p = read_sine_params(params);
        GibbsOptions opts;
        opts.burnin = params.integer("burnin", opts.burnin);
        opts.thin = params.integer("thin", opts.thin);
        data.values = sample_sine(p, sim_n, seed, opts);
        data.kind = {Geometry::Torus, p.k()};
        data.format = DataFormat::AnglesRadians;
      } else {
        throw ValidationError("unknown model '" + sim_model +
                              "' (expected vmf, bingham, kent or sine)");
      }
      if (const auto extra = params.unused(); !extra.empty())
        throw ValidationError(params_path + ": unknown key '" + extra.front() + "' for model " +
                              sim_model);
      auto f = open_output(sim_out);
      f << provenance_line(args, *sim_seed);
      write_dataset(f, data);
      out << "seed=" << *sim_seed << "\n";
      return kExitOk;
    }

    if (*eff) {
      if (reps < 1000) throw ValidationError("--reps must be at least 1000");
      const auto grid = efficiency_grid(kappas, ns, reps, eff_seed, threads);
      const auto ares = are_table(kappas);
      {
        auto f = open_output(eff_out);
        f << provenance_line(args, eff_seed);
        f << "kappa,n,reps,ratio_pct,ci,excluded,are_pct\n";
        for (std::size_t c = 0; c < grid.size(); ++c) {
          const auto& r = grid[c];
          f << format_number(r.kappa) << ',' << r.n << ',' << r.reps << ','
            << format_number(r.ratio_pct) << ',' << format_number(r.ci_halfwidth) << ','
            << r.excluded << ',' << format_number(100.0 * ares[c / ns.size()].are) << '\n';
        }
      }
      std::ostringstream wide_csv;
      wide_csv << "kappa";
      for (long n : ns) wide_csv << ",n=" << n;
      wide_csv << ",ARE\n";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-8s", "kappa");
      out << buf;
      for (long n : ns) {
        std::snprintf(buf, sizeof buf, "%8s", ("n=" + std::to_string(n)).c_str());
        out << buf;
      }
      out << "     ARE\n";
      for (std::size_t i = 0; i < kappas.size(); ++i) {
        wide_csv << format_number(kappas[i]);
        std::snprintf(buf, sizeof buf, "%-8g", kappas[i]);
        out << buf;
        for (std::size_t j = 0; j < ns.size(); ++j) {
          const double v = grid[i * ns.size() + j].ratio_pct;
          wide_csv << ',' << format_number(v);
          std::snprintf(buf, sizeof buf, "%8.0f", v);
          out << buf;
        }
        wide_csv << ',' << format_number(100.0 * ares[i].are) << '\n';
        std::snprintf(buf, sizeof buf, "%8.0f\n", 100.0 * ares[i].are);
        out << buf;
      }
      long excluded = 0;
      for (const auto& r : grid) excluded += r.excluded;
      out << "excluded replicates: " << excluded << " of "
          << reps * static_cast<long>(grid.size()) << "\n";
      if (!table_out.empty()) {
        auto f = open_output(table_out);
        f << provenance_line(args, eff_seed) << wide_csv.str();
      }
      return kExitOk;
    }

    if (*are_cmd) {
      const auto rows = are_grid(kmin, kmax, steps, log_spacing);
      std::ostringstream s;
      s << "kappa,are\n";
      for (const auto& r : rows) s << format_number(r.kappa) << ',' << format_number(r.are) << '\n';
      if (are_out.empty()) {
        out << s.str();
      } else {
        auto f = open_output(are_out);
        f << s.str();
      }
      return kExitOk;
    }

    if (*stokes) {
      const QuadratureGrid grid(resolution);
      const auto z1 = [](const PolarPoint& x) { return std::cos(x.theta); };
      const auto z2 = [](const PolarPoint& x) { return std::sin(x.theta) * std::cos(x.phi); };
      const auto z3 = [](const PolarPoint& x) { return std::sin(x.theta) * std::sin(x.phi); };
      const auto z1sq = [](const PolarPoint& x) { return std::pow(std::cos(x.theta), 2); };
      const auto ez1 = [](const PolarPoint& x) { return std::exp(std::cos(x.theta)); };
      out << "pair,resolution,residual\n";
      for (const auto& p : pairs) {
        double res = 0.0;
        if (p == "z1-z2") res = stokes_residual(z1, z2, grid, h);
        else if (p == "z1-z1") res = stokes_residual(z1, z1, grid, h);
        else if (p == "z1sq-z3") res = stokes_residual(z1sq, z3, grid, h);
        else if (p == "exp-z1") res = stokes_residual(ez1, z1, grid, h);
        else throw ValidationError("unknown pair '" + p + "'");
        out << p << ',' << resolution << ',' << format_number(res) << '\n';
      }
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n" << "hint: " << hint_for(e) << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace dirsme::cli
