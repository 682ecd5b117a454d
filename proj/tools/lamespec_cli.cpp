// Command-line driver: analytic disk spectrum, perturbation coefficients,
// explicit competitor domains, FEM solves and the parameter sweeps. CSV out.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lamespec/analytic_domains.hpp"
#include "lamespec/disk_perturbation.hpp"
#include "lamespec/disk_spectrum.hpp"
#include "lamespec/elasticity_params.hpp"
#include "lamespec/experiments.hpp"
#include "lamespec/fem/domains.hpp"

using namespace lamespec;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct Material {
  std::optional<double> nu;
  std::optional<double> lambda;
  double mu = 1.0;

  void add_to(CLI::App* app) {
    auto* nu_opt = app->add_option("--nu", nu, "Poisson ratio");
    auto* la_opt = app->add_option("--lambda", lambda, "first Lame parameter");
    nu_opt->excludes(la_opt);
    app->add_option("--mu", mu, "shear modulus")->capture_default_str();
  }

  ElasticityParams params() const {
    if (nu) return ElasticityParams::from_poisson(*nu, mu);
    if (lambda) return ElasticityParams::from_lame(*lambda, mu);
    throw std::invalid_argument("one of --nu or --lambda is required");
  }
};

struct Globals {
  std::string out;
  std::uint64_t seed = 12345;
  int jobs = 1;
  bool timestamp = false;

  RunOptions run() const {
    RunOptions r;
    r.solver.seed = seed;
    r.jobs = jobs;
    return r;
  }
};

std::string now_iso() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::vector<double> arange(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad grid range");
  std::vector<double> v;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(lo + i * step);
  return v;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// fem-solve also accepts mesh:<file> in the text mesh format.
fem::Mesh mesh_for(const std::string& domain, const ElasticityParams& p, int refine) {
  if (domain.rfind("mesh:", 0) == 0) {
    std::ifstream in(domain.substr(5));
    if (!in) throw std::invalid_argument("cannot open mesh file " + domain.substr(5));
    return fem::read_mesh(in);
  }
  return fem::build_mesh(fem::parse_domain(domain), p, refine);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lame eigenvalue toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "output CSV path (default stdout)");
  app.add_option("--seed", g.seed, "eigensolver start-block seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_flag("--timestamp", g.timestamp, "fill the timestamp column of sweep rows");
  app.fallthrough();

  std::ostringstream csv;
  std::ostringstream note;  // human-readable summary for stderr
  std::function<void()> action;

  // disk-spectrum
  Material m_disk;
  int disk_kmax = kDefaultKMax;
  auto* disk = app.add_subcommand("disk-spectrum", "first eigenvalue of the unit disk");
  m_disk.add_to(disk);
  disk->add_option("--k-max", disk_kmax, "largest angular mode scanned")->capture_default_str();
  disk->callback([&] {
    action = [&] {
      const ElasticityParams p = m_disk.params();
      const DiskEigenvalue e = first_eigenvalue(p, disk_kmax);
      csv << csv_line({"nu", "mu", "lambda", "regime", "k", "Lambda"});
      csv << csv_line({csv_number(p.nu()), csv_number(p.mu()), csv_number(p.lambda()), to_string(e.regime),
                       e.mode_k ? std::to_string(*e.mode_k) : "", csv_number(e.value)});
    };
  });

  // perturbation
  Material m_pert;
  int pert_kmax = 20;
  auto* pert = app.add_subcommand("perturbation", "second shape derivative coefficients (simple regime)");
  m_pert.add_to(pert);
  pert->add_option("--k-max", pert_kmax, "largest mode")->check(CLI::Range(2, 400))->capture_default_str();
  pert->callback([&] {
    action = [&] {
      const ElasticityParams p = m_pert.params();
      csv << csv_line({"k", "c_k", "C_k"});
      for (int k = 1; k <= pert_kmax; ++k)
        csv << csv_line({std::to_string(k), csv_number(c_coefficient(k, p)), csv_number(big_c_coefficient(k, p))});
      const Coercivity c = coercivity_constant(p, std::max(pert_kmax, 2));
      note << "A0 = " << csv_number(c.a0) << " (attained at k = " << c.argmin_k << ")\n";
    };
  });

  // certificate
  Material m_cert;
  auto* cert = app.add_subcommand("certificate", "M11 witness that the disk is not a minimizer (double regime)");
  m_cert.add_to(cert);
  cert->callback([&] {
    action = [&] {
      const ElasticityParams p = m_cert.params();
      const DiskEigenvalue e = first_eigenvalue(p);
      if (!e.mode_k || e.regime != DiskRegime::TranscendentalDouble)
        throw DomainError("certificate needs nu < nu* (double eigenvalue)");
      const M11Witness w = m11_gateaux(*e.mode_k, p, e, 1.0);
      const double sign = w.value < 0.0 ? 1.0 : -1.0;
      csv << csv_line({"nu", "mu", "Lambda", "k", "perturbation_mode", "bracket", "relative_bracket", "m11_at_alpha_1",
                       "alpha_sign_for_decrease", "certified"});
      csv << csv_line({csv_number(p.nu()), csv_number(p.mu()), csv_number(e.value), std::to_string(w.k),
                       "cos(" + std::to_string(2 * w.k) + "theta)", csv_number(w.bracket),
                       csv_number(w.relative_bracket), csv_number(w.value), sign > 0 ? "+" : "-",
                       bool_str(w.relative_bracket > 1e-6)});
    };
  });

  // rhombus
  Material m_rh;
  double rh_area = std::numbers::pi;
  auto* rh = app.add_subcommand("rhombus", "explicit rhombus eigenpair");
  m_rh.add_to(rh);
  rh->add_option("--area", rh_area, "rhombus area")->capture_default_str();
  rh->callback([&] {
    action = [&] {
      const ElasticityParams p = m_rh.params();
      const Rhombus r = build_rhombus(p, rh_area);
      const double disk_same_area = first_eigenvalue(p).value * std::numbers::pi / rh_area;
      csv << csv_line({"nu", "mu", "area", "Lambda", "disk_Lambda", "beats_disk", "ax", "ay", "bx", "by", "cx", "cy",
                       "dx", "dy"});
      std::vector<std::string> row{csv_number(p.nu()), csv_number(p.mu()), csv_number(r.area), csv_number(r.eigenvalue),
                                   csv_number(disk_same_area), bool_str(r.eigenvalue < disk_same_area)};
      for (const auto& v : r.vertices) {
        row.push_back(csv_number(v.x()));
        row.push_back(csv_number(v.y()));
      }
      csv << csv_line(row);
    };
  });

  // rectangle-bound
  Material m_rect;
  double rect_t = 0.4;
  bool rect_scan = false;
  auto* rect = app.add_subcommand("rectangle-bound", "Rayleigh upper bound on rectangles of area pi");
  m_rect.add_to(rect);
  auto* t_opt = rect->add_option("--t", rect_t, "aspect ratio in (0, 1]")->capture_default_str();
  rect->add_flag("--scan", rect_scan, "scan the aspect grid 0.30..1.00")->excludes(t_opt);
  rect->callback([&] {
    action = [&] {
      const ElasticityParams p = m_rect.params();
      const double disk_value = first_eigenvalue(p).value;
      csv << csv_line({"nu", "mu", "t", "L", "ell", "bound", "disk_Lambda", "beats_disk"});
      std::vector<double> ts = rect_scan ? rectangle_t_grid() : std::vector<double>{rect_t};
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      for (double t : ts) {
        const RectangleSpec s = make_rectangle_spec(t);
        const double b = rectangle_upper_bound(p, s);
        csv << csv_line({csv_number(p.nu()), csv_number(p.mu()), csv_number(t), csv_number(s.L), csv_number(s.ell),
                         csv_number(b), csv_number(disk_value), bool_str(b < disk_value)});
      }
    };
  });

  // thresholds
  auto* thr = app.add_subcommand("thresholds", "nu*, rhombus threshold and rectangle verdicts");
  thr->callback([&] {
    action = [&] {
      csv << threshold_csv_header();
      for (const auto& r : threshold_report()) csv << to_csv(r);
    };
  });

  // fem-solve
  Material m_fem;
  std::string fem_domain = "disk";
  int fem_refine = 3;
  int fem_modes = fem::kFemModes;
  std::string mesh_out;
  int fem_max_iter = fem::SolverOptions{}.max_iterations;
  auto* fsolve = app.add_subcommand("fem-solve", "P2 finite element eigenvalues");
  m_fem.add_to(fsolve);
  fsolve->add_option("--domain", fem_domain, "disk | ellipse:a | rectangle:t | rhombus:area | mesh:<file>")
      ->capture_default_str();
  fsolve->add_option("--refine", fem_refine, "refinement level 0..5")->capture_default_str();
  fsolve->add_option("--modes", fem_modes, "number of eigenvalues")->check(CLI::Range(1, 50))->capture_default_str();
  fsolve->add_option("--mesh-out", mesh_out, "write the mesh in text format");
  fsolve->add_option("--max-iterations", fem_max_iter, "subspace iteration limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fsolve->callback([&] {
    action = [&] {
      const ElasticityParams p = m_fem.params();
      const fem::Mesh mesh = mesh_for(fem_domain, p, fem_refine);
      if (!mesh_out.empty()) {
        std::ofstream mo(mesh_out);
        if (!mo) throw std::invalid_argument("cannot write " + mesh_out);
        fem::write_mesh(mo, mesh);
      }
      fem::SolverOptions so;
      so.seed = g.seed;
      so.max_iterations = fem_max_iter;
      const fem::EigenResult r = fem::solve_smallest(fem::assemble_lame(mesh, p), fem_modes, so);
      csv << csv_line({"domain", "nu", "refine", "mode", "value", "residual", "gap"});
      for (int i = 0; i < fem_modes; ++i)
        csv << csv_line({fem_domain, csv_number(p.nu()), std::to_string(fem_refine), std::to_string(i + 1),
                         csv_number(r.values[i]), csv_number(r.residuals[i]), i < r.gaps.size() ? csv_number(r.gaps[i]) : ""});
    };
  });

  // ellipse-sweep
  std::vector<double> es_nus;
  double es_mu = 1.0;
  std::vector<double> es_as;
  double es_amin = 1.0, es_amax = 2.0, es_astep = 0.05;
  int es_refine = kDefaultEllipseRefinement;
  auto* es = app.add_subcommand("ellipse-sweep", "first eigenvalue of ellipses of area pi against a");
  es->add_option("--nu", es_nus, "Poisson ratio (repeatable)")->required();
  es->add_option("--mu", es_mu, "shear modulus")->capture_default_str();
  auto* av = es->add_option("--a-values", es_as, "explicit semi-axis grid")->delimiter(',');
  es->add_option("--a-min", es_amin)->excludes(av)->capture_default_str();
  es->add_option("--a-max", es_amax)->excludes(av)->capture_default_str();
  es->add_option("--a-step", es_astep)->excludes(av)->capture_default_str();
  es->add_option("--refine", es_refine, "refinement level")->capture_default_str();
  es->callback([&] {
    action = [&] {
      const std::vector<double> grid = es_as.empty() ? arange(es_amin, es_amax, es_astep) : es_as;
      csv << sweep_csv_header();
      std::vector<EllipseSweepSummary> sums;
      const std::string stamp = g.timestamp ? now_iso() : "";
      for (double nu : es_nus) {
        auto rows = ellipse_sweep(nu, es_mu, grid, es_refine, g.run());
        for (auto& r : rows) {
          r.timestamp = stamp;
          csv << to_csv(r);
        }
        sums.push_back(summarize_ellipse_sweep(rows));
        note << "nu = " << nu << ": min corrected ratio " << csv_number(sums.back().min_ratio) << " at a = "
             << sums.back().argmin_a << "\n";
      }
      if (es_nus.size() > 1) {
        if (const auto c = ellipse_crossing(es_nus, sums))
          note << "observed crossing (best ellipse stops beating the disk): nu ~ " << csv_number(*c) << "\n";
        else
          note << "no crossing observed on the sampled nu values\n";
      }
    };
  });

  // gamma-sweep
  std::string gs_domain = "disk";
  double gs_mu = 1.0;
  std::vector<double> gs_ratios = default_gamma_grid();
  int gs_refine = 4;
  auto* gs = app.add_subcommand("gamma-sweep", "Lambda^a / mu along increasing a = (lambda + mu) / mu");
  gs->add_option("--domain", gs_domain)->capture_default_str();
  gs->add_option("--mu", gs_mu)->capture_default_str();
  gs->add_option("--ratios", gs_ratios, "increasing grid of a")->delimiter(',');
  gs->add_option("--refine", gs_refine)->capture_default_str();
  gs->callback([&] {
    action = [&] {
      const auto rows = gamma_sweep(fem::parse_domain(gs_domain), gs_mu, gs_ratios, gs_refine, g.run(), &std::cerr);
      csv << sweep_csv_header();
      const std::string stamp = g.timestamp ? now_iso() : "";
      for (auto r : rows) {
        r.timestamp = stamp;
        csv << to_csv(r);
      }
      if (!nondecreasing_fem(rows)) note << "warning: sequence is not nondecreasing in a\n";
    };
  });

  // bounds-report
  Material m_b;
  std::string b_domain = "disk";
  int b_refine = 3;
  auto* br = app.add_subcommand("bounds-report", "mu lambda1_D < Lambda <= ((lambda + 3 mu) / 2) lambda1_D");
  m_b.add_to(br);
  br->add_option("--domain", b_domain)->capture_default_str();
  br->add_option("--refine", b_refine)->capture_default_str();
  br->callback([&] {
    action = [&] {
      csv << bounds_csv_header();
      csv << to_csv(bounds_report(fem::parse_domain(b_domain), m_b.params(), b_refine, g.run()));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    action();
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitInvalid;
  }

  if (g.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(g.out);
    if (!f) {
      std::cerr << "cannot write " << g.out << "\n";
      return kExitInvalid;
    }
    f << csv.str();
  }
  std::cerr << note.str();
  return 0;
}
