#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "lamespec/analytic_domains.hpp"
#include "lamespec/disk_perturbation.hpp"
#include "lamespec/disk_spectrum.hpp"
#include "lamespec/elasticity_params.hpp"
#include "lamespec/fem/assembly.hpp"
#include "lamespec/fem/domains.hpp"
#include "lamespec/fem/eigensolver.hpp"

namespace lamespec {

// ---------------------------------------------------------------- CSV

/// Floats with 12 significant digits; NaN renders as an empty field.
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) s += ',';
    s += fields[i];
  }
  s += '\n';
  return s;
}

// ---------------------------------------------------------------- worker pool

/// Runs fn(0..n-1) on up to `jobs` threads; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int jobs, F&& fn) {
  std::vector<std::optional<T>> slots(n);
  const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------- sweep rows

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One sweep point. `corrected` is the FEM value rescaled by the disk's
/// analytic / FEM ratio at the same refinement (ellipse sweep only).
struct SweepRow {
  std::string experiment;
  double nu = kNaN;
  double mu = kNaN;
  std::string param;
  double param_value = kNaN;
  double lambda_analytic = kNaN;
  double lambda_fem = kNaN;
  double reference = kNaN;
  double corrected = kNaN;
  int refinement = -1;
  double residual = kNaN;
  double gap = kNaN;
  std::string timestamp;
};

inline std::string sweep_csv_header() {
  return csv_line({"experiment", "nu", "mu", "param", "param_value", "lambda_analytic", "lambda_fem", "reference",
                   "corrected", "refinement", "residual", "gap", "timestamp"});
}

inline std::string to_csv(const SweepRow& r) {
  return csv_line({r.experiment, csv_number(r.nu), csv_number(r.mu), r.param, csv_number(r.param_value),
                   csv_number(r.lambda_analytic), csv_number(r.lambda_fem), csv_number(r.reference),
                   csv_number(r.corrected), r.refinement >= 0 ? std::to_string(r.refinement) : "",
                   csv_number(r.residual), csv_number(r.gap), r.timestamp});
}

struct RunOptions {
  fem::SolverOptions solver;
  int jobs = 1;
};

// ---------------------------------------------------------------- ellipse sweep

inline std::vector<double> default_ellipse_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(1.0 + 0.05 * i);
  return g;
}

inline constexpr int kDefaultEllipseRefinement = 3;

/// Lambda_h of the ellipse with semi-axes a, 1/a for each a (a >= 1; a <-> 1/a is a
/// rotation). The disk at the same refinement provides the discretisation correction.
inline std::vector<SweepRow> ellipse_sweep(double nu, double mu, const std::vector<double>& a_values, int refinement,
                                           const RunOptions& opt = {}) {
  const ElasticityParams p = ElasticityParams::from_poisson(nu, mu);
  for (double a : a_values)
    if (!(a >= 1.0 && a <= 2.5)) throw DomainError("ellipse sweep values must lie in [1, 2.5]");
  const double disk_exact = first_eigenvalue(p).value;
  // Index 0 is the disk itself; the rest follow a_values.
  auto results = parallel_map<fem::FemEigenvalue>(a_values.size() + 1, opt.jobs, [&](std::size_t i) {
    const fem::DomainSpec d = i == 0 ? fem::DomainSpec{fem::DiskDomain{}} : fem::DomainSpec{fem::EllipseDomain{a_values[i - 1]}};
    return fem::lame_eigenvalue_fem(d, p, refinement, opt.solver);
  });
  const double disk_fem = results[0].value;
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < a_values.size(); ++i) {
    const fem::FemEigenvalue& r = results[i + 1];
    SweepRow row;
    row.experiment = "ellipse";
    row.nu = nu;
    row.mu = mu;
    row.param = "a";
    row.param_value = a_values[i];
    row.lambda_fem = r.value;
    row.reference = disk_exact;
    row.corrected = r.value * disk_exact / disk_fem;
    row.refinement = refinement;
    row.residual = r.residuals.maxCoeff();
    row.gap = r.gap;
    if (a_values[i] == 1.0) row.lambda_analytic = disk_exact;
    rows.push_back(row);
  }
  return rows;
}

struct EllipseSweepSummary {
  double argmin_a = kNaN;
  double min_ratio = kNaN;           // min over the grid of corrected / disk
  double interior_min_ratio = kNaN;  // same, over a > 1 only
  double interior_argmin_a = kNaN;
  bool minimum_at_disk = false;
};

inline EllipseSweepSummary summarize_ellipse_sweep(const std::vector<SweepRow>& rows) {
  EllipseSweepSummary s;
  s.min_ratio = s.interior_min_ratio = std::numeric_limits<double>::infinity();
  for (const SweepRow& r : rows) {
    const double ratio = r.corrected / r.reference;
    if (ratio < s.min_ratio) {
      s.min_ratio = ratio;
      s.argmin_a = r.param_value;
    }
    if (r.param_value > 1.0 && ratio < s.interior_min_ratio) {
      s.interior_min_ratio = ratio;
      s.interior_argmin_a = r.param_value;
    }
  }
  s.minimum_at_disk = s.argmin_a == 1.0;
  return s;
}

/// Poisson ratio where the best ellipse with a > 1 stops beating the disk, by
/// linear interpolation of (interior_min_ratio - 1) between the sampled nu values.
inline std::optional<double> ellipse_crossing(const std::vector<double>& nus, const std::vector<EllipseSweepSummary>& s) {
  for (std::size_t i = 0; i + 1 < nus.size(); ++i) {
    const double d0 = s[i].interior_min_ratio - 1.0, d1 = s[i + 1].interior_min_ratio - 1.0;
    if (d0 < 0.0 && d1 >= 0.0) return nus[i] + (nus[i + 1] - nus[i]) * (-d0) / (d1 - d0);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- gamma sweep

inline std::vector<double> default_gamma_grid() { return {1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0}; }

inline constexpr double kIllConditionedRatio = 1e4;

/// Lambda^a_h / mu on a fixed mesh for a = (lambda + mu) / mu along the grid.
inline std::vector<SweepRow> gamma_sweep(const fem::DomainSpec& domain, double mu, const std::vector<double>& a_ratios,
                                         int refinement, const RunOptions& opt = {}, std::ostream* warn = nullptr) {
  if (a_ratios.empty()) throw DomainError("gamma sweep needs at least one ratio");
  for (std::size_t i = 0; i < a_ratios.size(); ++i) {
    if (!(a_ratios[i] > 0.0)) throw DomainError("ratios must be positive");
    if (i && !(a_ratios[i] > a_ratios[i - 1])) throw DomainError("ratios must be increasing");
    if (a_ratios[i] > kIllConditionedRatio && warn)
      *warn << "warning: a = " << a_ratios[i] << " exceeds 1e4; the stiffness matrix is ill-conditioned\n";
  }
  // The rhombus shape depends on the material; build its mesh from the first ratio.
  const ElasticityParams p0 = ElasticityParams::from_ratio(a_ratios.front(), mu);
  const fem::Mesh mesh = fem::build_mesh(domain, p0, refinement);
  const fem::LameParts parts = fem::assemble_lame_parts(mesh);
  const bool disk = std::holds_alternative<fem::DiskDomain>(domain);
  auto results = parallel_map<fem::EigenResult>(a_ratios.size(), opt.jobs, [&](std::size_t i) {
    return fem::solve_smallest(fem::lame_pencil(parts, ElasticityParams::from_ratio(a_ratios[i], mu)), fem::kFemModes,
                               opt.solver);
  });
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < a_ratios.size(); ++i) {
    const ElasticityParams p = ElasticityParams::from_ratio(a_ratios[i], mu);
    SweepRow row;
    row.experiment = "gamma:" + fem::to_string(domain);
    row.nu = p.nu();
    row.mu = mu;
    row.param = "a_ratio";
    row.param_value = a_ratios[i];
    row.lambda_fem = results[i].values[0] / mu;
    if (disk) {
      row.lambda_analytic = first_eigenvalue(p).value / mu;
      row.reference = j11() * j11();
    }
    row.refinement = refinement;
    row.residual = results[i].residuals.maxCoeff();
    row.gap = results[i].gap();
    rows.push_back(row);
  }
  return rows;
}

inline bool nondecreasing_fem(const std::vector<SweepRow>& rows, double rel_slack = 1e-10) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].lambda_fem < rows[i - 1].lambda_fem * (1.0 - rel_slack)) return false;
  return true;
}

// ---------------------------------------------------------------- bounds report

inline constexpr double kUpperBoundSlack = 0.005;

/// mu lambda1_D < Lambda <= ((lambda + 3 mu) / 2) lambda1_D on one mesh, plus the
/// Korn constant 2 / lambda1_D.
struct BoundsRow {
  std::string domain;
  double nu = 0.0;
  double mu = 0.0;
  int refinement = 0;
  double lambda1_dirichlet = 0.0;
  double lame = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
  double korn_constant = 0.0;
  double ratio_to_mu = 0.0;  // Lambda / (mu lambda1_D)
};

inline std::string bounds_csv_header() {
  return csv_line({"domain", "nu", "mu", "refinement", "lambda1_dirichlet", "Lambda", "lower", "upper", "lower_ok",
                   "upper_ok", "korn_constant", "ratio_to_mu"});
}

inline std::string to_csv(const BoundsRow& r) {
  return csv_line({r.domain, csv_number(r.nu), csv_number(r.mu), std::to_string(r.refinement),
                   csv_number(r.lambda1_dirichlet), csv_number(r.lame), csv_number(r.lower), csv_number(r.upper),
                   r.lower_ok ? "true" : "false", r.upper_ok ? "true" : "false", csv_number(r.korn_constant),
                   csv_number(r.ratio_to_mu)});
}

inline BoundsRow bounds_report(const fem::DomainSpec& domain, const ElasticityParams& p, int refinement,
                               const RunOptions& opt = {}) {
  const fem::Mesh mesh = fem::build_mesh(domain, p, refinement);
  const fem::EigenResult scalar = fem::solve_smallest(fem::assemble_scalar_laplace(mesh), 1, opt.solver);
  const fem::EigenResult vec = fem::solve_smallest(fem::assemble_lame(mesh, p), 1, opt.solver);
  BoundsRow r;
  r.domain = fem::to_string(domain);
  r.nu = p.nu();
  r.mu = p.mu();
  r.refinement = refinement;
  r.lambda1_dirichlet = scalar.values[0];
  r.lame = vec.values[0];
  r.lower = p.mu() * r.lambda1_dirichlet;
  r.upper = 0.5 * (p.lambda() + 3.0 * p.mu()) * r.lambda1_dirichlet;
  r.lower_ok = r.lower < r.lame;
  r.upper_ok = r.lame <= r.upper * (1.0 + kUpperBoundSlack);
  r.korn_constant = 2.0 / r.lambda1_dirichlet;
  r.ratio_to_mu = r.lame / r.lower;
  return r;
}

// ---------------------------------------------------------------- thresholds

struct ThresholdRow {
  std::string quantity;
  double value = kNaN;
  std::string verdict;
};

inline std::string threshold_csv_header() { return csv_line({"quantity", "value", "verdict"}); }

inline std::string to_csv(const ThresholdRow& r) { return csv_line({r.quantity, csv_number(r.value), r.verdict}); }

/// nu*, the rhombus threshold, rectangle verdicts on nu in {3/8, 0.39, 2/5}, and
/// whether these cover nu <= 2/5 (below nu*: M_11 certificate; up to the rhombus
/// threshold: rhombus; [3/8, 2/5]: rectangle).
inline std::vector<ThresholdRow> threshold_report() {
  std::vector<ThresholdRow> rows;
  const double ns = nu_star();
  const double nr = rhombus_disk_threshold();
  rows.push_back({"nu_star", ns, "double eigenvalue below and simple above"});
  rows.push_back({"rhombus_threshold", nr, "rhombus of area pi beats the disk below"});
  bool rect_all = true;
  for (double nu : {3.0 / 8.0, 0.39, 2.0 / 5.0}) {
    const RectangleVerdict v = rectangle_beats_disk(ElasticityParams::from_poisson(nu, 1.0));
    rect_all = rect_all && v.beats;
    char name[64];
    std::snprintf(name, sizeof name, "rectangle_nu_%.4g", nu);
    rows.push_back({name, v.best_bound, v.beats ? "beats disk at t=" + csv_number(*v.witness_t) : "does not beat disk"});
  }
  // The certificate needs a nonzero bracket at every nu < nu*; sample it.
  bool cert_all = true;
  for (double nu = -0.9; nu < ns - 1e-6; nu += 0.05) {
    const ElasticityParams p = ElasticityParams::from_poisson(nu, 1.0);
    const DiskEigenvalue e = first_eigenvalue(p);
    cert_all = cert_all && m11_gateaux(*e.mode_k, p, e, 1.0).relative_bracket > 1e-6;
  }
  const bool covered = cert_all && nr > 3.0 / 8.0 && rect_all;
  rows.push_back({"disk_non_optimal_up_to", 0.4, covered ? "true" : "false"});
  return rows;
}

}  // namespace lamespec
