#include <gsl/gsl_fit.h>
#include <gsl/gsl_multifit.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "ftsurf/analysis.hpp"

namespace ftsurf {

namespace {

template <class T, void (*Free)(T*)>
struct GslDeleter {
  void operator()(T* p) const { Free(p); }
};
using Vector = std::unique_ptr<gsl_vector, GslDeleter<gsl_vector, gsl_vector_free>>;
using Matrix = std::unique_ptr<gsl_matrix, GslDeleter<gsl_matrix, gsl_matrix_free>>;
using Workspace = std::unique_ptr<gsl_multifit_linear_workspace,
                                  GslDeleter<gsl_multifit_linear_workspace, gsl_multifit_linear_free>>;

struct LinearFit {
  std::vector<double> coef;
  std::vector<double> cov;  // row-major
  double chisq = 0.0;
};

// Weighted least squares; rows of `design` are observations.
LinearFit weighted_linear(const std::vector<std::vector<double>>& design, const std::vector<double>& y,
                          const std::vector<double>& w) {
  const std::size_t n = y.size();
  const std::size_t k = design.front().size();
  Matrix X(gsl_matrix_alloc(n, k));
  Matrix cov(gsl_matrix_alloc(k, k));
  Vector Y(gsl_vector_alloc(n)), W(gsl_vector_alloc(n)), c(gsl_vector_alloc(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) gsl_matrix_set(X.get(), i, j, design[i][j]);
    gsl_vector_set(Y.get(), i, y[i]);
    gsl_vector_set(W.get(), i, w[i]);
  }
  Workspace ws(gsl_multifit_linear_alloc(n, k));
  LinearFit out;
  gsl_multifit_wlinear(X.get(), W.get(), Y.get(), c.get(), cov.get(), &out.chisq, ws.get());
  for (std::size_t j = 0; j < k; ++j) out.coef.push_back(gsl_vector_get(c.get(), j));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) out.cov.push_back(gsl_matrix_get(cov.get(), a, b));
  }
  return out;
}

double point_sigma(const ThresholdPoint& pt) { return std::max(pt.error, 1e-3 * pt.p_L + 1e-12); }

struct Simplex {
  double x = 0.0, y = 0.0, f = 0.0;
  bool converged = false;
};

// Nelder-Mead over (p_th, log nu).
template <class F>
Simplex minimize2(F& f, double x0, double y0, double sx, double sy) {
  gsl_multimin_function fn;
  fn.n = 2;
  fn.f = [](const gsl_vector* v, void* params) { return (*static_cast<F*>(params))(gsl_vector_get(v, 0), gsl_vector_get(v, 1)); };
  fn.params = &f;
  Vector start(gsl_vector_alloc(2)), step(gsl_vector_alloc(2));
  gsl_vector_set(start.get(), 0, x0);
  gsl_vector_set(start.get(), 1, y0);
  gsl_vector_set(step.get(), 0, sx);
  gsl_vector_set(step.get(), 1, sy);
  std::unique_ptr<gsl_multimin_fminimizer, GslDeleter<gsl_multimin_fminimizer, gsl_multimin_fminimizer_free>> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2));
  gsl_multimin_fminimizer_set(s.get(), &fn, start.get(), step.get());
  Simplex out;
  for (int it = 0; it < 2000; ++it) {
    if (gsl_multimin_fminimizer_iterate(s.get())) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), 1e-9) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  out.x = gsl_vector_get(s->x, 0);
  out.y = gsl_vector_get(s->x, 1);
  out.f = s->fval;
  return out;
}

}  // namespace

SlopeFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  std::vector<double> x, y;
  for (auto [p, pl] : points) {
    if (p <= 0) throw std::invalid_argument("physical error rate must be positive");
    if (pl <= 0) throw std::invalid_argument("zero-failure point in slope fit; resample with more shots");
    x.push_back(std::log(p));
    y.push_back(std::log(pl));
  }
  double c0, c1, cov00, cov01, cov11, sumsq;
  gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
  return SlopeFit{c1, std::sqrt(cov11), c0};
}

double collapse_residual(const std::vector<ThresholdCurve>& curves, double p_th, double nu, int order,
                         std::vector<double>* master) {
  std::vector<std::vector<double>> design;
  std::vector<double> y, w;
  for (const auto& c : curves) {
    const double scale = std::pow(static_cast<double>(c.d), 1.0 / nu);
    for (const auto& pt : c.points) {
      const double x = (pt.p - p_th) * scale;
      std::vector<double> row(order + 1);
      for (int j = 0; j <= order; ++j) row[j] = std::pow(x, j);
      design.push_back(std::move(row));
      y.push_back(pt.p_L);
      const double s = point_sigma(pt);
      w.push_back(1.0 / (s * s));
    }
  }
  const auto fit = weighted_linear(design, y, w);
  if (master) *master = fit.coef;
  const double dof = static_cast<double>(y.size()) - order - 3;
  return fit.chisq / std::max(1.0, dof);
}

ThresholdFit fit_threshold(const std::vector<ThresholdCurve>& curves, const ThresholdOptions& options) {
  if (curves.size() < 3) throw std::invalid_argument("threshold fit needs at least 3 distances");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& c : curves) {
    if (c.points.size() < 5) throw std::invalid_argument("threshold fit needs at least 5 points per distance");
    for (const auto& pt : c.points) {
      lo = std::min(lo, pt.p);
      hi = std::max(hi, pt.p);
    }
  }
  if (!(hi > lo)) throw std::invalid_argument("threshold fit needs a range of physical error rates");
  const int order = options.master_order;

  auto solve = [&](const std::vector<ThresholdCurve>& data, const std::vector<std::pair<double, double>>& starts) {
    // Scaled to O(1) coordinates for the simplex.
    auto f = [&](double u, double lognu) {
      const double p_th = lo + u * (hi - lo);
      const double nu = std::exp(lognu);
      if (nu < 0.05 || nu > 20) return 1e300;
      return collapse_residual(data, p_th, nu, order);
    };
    Simplex best;
    best.f = std::numeric_limits<double>::infinity();
    for (auto [u, lognu] : starts) {
      const auto s = minimize2(f, u, lognu, 0.1, 0.2);
      if (s.f < best.f) best = s;
    }
    return best;
  };

  std::vector<std::pair<double, double>> grid;
  for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double nu : {0.7, 1.0, 1.5, 2.2}) grid.emplace_back(u, std::log(nu));
  }
  const auto best = solve(curves, grid);
  ThresholdFit fit;
  fit.master_order = order;
  fit.p_th = lo + best.x * (hi - lo);
  fit.nu = std::exp(best.y);
  fit.residual = best.f;
  fit.converged = best.converged;
  fit.boundary_pinned = best.x < 0.0 || best.x > 1.0;
  collapse_residual(curves, fit.p_th, fit.nu, order, &fit.master);

  if (options.bootstrap > 0) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> ps, nus;
    for (int b = 0; b < options.bootstrap; ++b) {
      auto data = curves;
      for (auto& c : data) {
        for (auto& pt : c.points) pt.p_L += point_sigma(pt) * gauss(rng);
      }
      const auto s = solve(data, {{best.x, best.y}});
      ps.push_back(lo + s.x * (hi - lo));
      nus.push_back(std::exp(s.y));
    }
    auto sd = [](const std::vector<double>& v) {
      double m = 0, q = 0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      for (double x : v) q += (x - m) * (x - m);
      return std::sqrt(q / std::max<double>(1.0, static_cast<double>(v.size()) - 1));
    };
    fit.p_th_error = sd(ps);
    fit.nu_error = sd(nus);
  }
  return fit;
}

double ResourceFit::predict(double n) const { return c0 * std::pow(p / c1, c2 * std::sqrt(n)); }

namespace {

double log_weight(const ResourcePoint& pt) {
  if (pt.error <= 0) return 1.0;
  const double s = pt.error / pt.p_L;
  return 1.0 / (s * s);
}

}  // namespace

ResourceFit fit_resource_curve(const std::vector<ResourcePoint>& points, double p, double c2_hint) {
  if (points.size() < 3) throw std::invalid_argument("resource fit needs at least 3 distances");
  if (p <= 0) throw std::invalid_argument("physical error rate must be positive");
  std::vector<std::vector<double>> design;
  std::vector<double> y, w;
  for (const auto& pt : points) {
    if (pt.p_L <= 0 || pt.n <= 0) throw std::invalid_argument("resource fit needs positive rates and qubit counts");
    design.push_back({1.0, std::sqrt(pt.n)});
    y.push_back(std::log(pt.p_L));
    w.push_back(log_weight(pt));
  }
  const auto lf = weighted_linear(design, y, w);
  const double slope = lf.coef[1];
  if (slope >= 0) throw std::invalid_argument("logical error rate does not decrease with qubit count; above threshold");
  ResourceFit fit;
  fit.p = p;
  fit.c0 = std::exp(lf.coef[0]);
  fit.c2 = c2_hint > 0 ? c2_hint : 1.0 / 3.0;
  fit.c1 = p / std::exp(slope / fit.c2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) fit.cov[a][b] = lf.cov[a * 2 + b];
  }
  fit.residual = lf.chisq;
  return fit;
}

ResourceFit fit_resource_surface(const std::vector<std::pair<double, std::vector<ResourcePoint>>>& data) {
  if (data.size() < 2) throw std::invalid_argument("surface fit needs at least two physical error rates");
  std::vector<std::vector<double>> design;
  std::vector<double> y, w;
  double p_mid = 0;
  for (const auto& [p, points] : data) {
    if (p <= 0) throw std::invalid_argument("physical error rate must be positive");
    p_mid += std::log(p);
    for (const auto& pt : points) {
      if (pt.p_L <= 0 || pt.n <= 0) throw std::invalid_argument("resource fit needs positive rates and qubit counts");
      const double r = std::sqrt(pt.n);
      // log p_L = log c0 + c2 r log p - c2 log c1 r
      design.push_back({1.0, r * std::log(p), r});
      y.push_back(std::log(pt.p_L));
      w.push_back(log_weight(pt));
    }
  }
  if (y.size() < 4) throw std::invalid_argument("surface fit needs at least 4 points");
  const auto lf = weighted_linear(design, y, w);
  ResourceFit fit;
  fit.c0 = std::exp(lf.coef[0]);
  fit.c2 = lf.coef[1];
  if (fit.c2 <= 0) throw std::invalid_argument("fitted exponent is not positive; data above threshold");
  fit.c1 = std::exp(-lf.coef[2] / fit.c2);
  fit.p = std::exp(p_mid / static_cast<double>(data.size()));
  fit.cov[0][0] = lf.cov[0];
  fit.cov[0][1] = lf.cov[1];
  fit.cov[1][0] = lf.cov[3];
  fit.cov[1][1] = lf.cov[4];
  fit.residual = lf.chisq;
  return fit;
}

QubitTarget qubits_to_target(const ResourceFit& fit, double p_L_target, CodeKind kind, int d_max) {
  if (p_L_target <= 0 || p_L_target >= 1) throw std::invalid_argument("target rate must lie in (0, 1)");
  QubitTarget out;
  for (int d = 3; d <= d_max; d += 2) {
    const auto n = total_qubits(kind, d);
    if (fit.predict(static_cast<double>(n)) <= p_L_target) {
      out.d = d;
      out.n = n;
      out.reachable = true;
      return out;
    }
  }
  return out;
}

}  // namespace ftsurf
