#include "biocircuit/ode/equilibria.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detail.hpp"

namespace biocircuit::ode {

namespace detail {

std::vector<double> eigen_real_parts(const std::vector<double>& matrix, int dim) {
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a(i, j) = matrix[static_cast<std::size_t>(i * dim + j)];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  std::vector<double> parts(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) parts[static_cast<std::size_t>(i)] = solver.eigenvalues()(i).real();
  std::sort(parts.begin(), parts.end());
  return parts;
}

Stability classify_from_real_parts(const std::vector<double>& real_parts) {
  constexpr double margin = 1e-6;
  bool all_negative = true;
  bool any_positive = false;
  for (double re : real_parts) {
    if (!(re < -margin)) all_negative = false;
    if (re > margin) any_positive = true;
  }
  if (all_negative) return Stability::stable;
  if (any_positive) return Stability::unstable;
  return Stability::marginal;
}

bool solve_linear(std::vector<double> a, std::vector<double> b, int dim,
                  std::vector<double>& x) {
  const auto n = static_cast<std::size_t>(dim);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-300) return false;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t j = ri + 1; j < n; ++j) acc -= a[ri * n + j] * x[j];
    x[ri] = acc / a[ri * n + ri];
  }
  return true;
}

}  // namespace detail

void Box::validate(int dim) const {
  if (lo.size() != static_cast<std::size_t>(dim) ||
      hi.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("box dimension does not match the system");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i]))
      throw std::invalid_argument("box bounds must be finite with lo < hi");
  }
}

std::vector<double> finite_difference_jacobian(const OdeSystem& system,
                                               std::span<const double> x,
                                               double t_eval) {
  const int dim = system.dim;
  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> jac(n * n);
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> xm(x.begin(), x.end());
  std::vector<double> fp(n), fm(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double step = std::max(1e-6, 1e-6 * std::abs(x[j]));
    xp[j] = x[j] + step;
    xm[j] = x[j] - step;
    system.rhs(t_eval, xp, fp);
    system.rhs(t_eval, xm, fm);
    for (std::size_t i = 0; i < n; ++i)
      jac[i * n + j] = (fp[i] - fm[i]) / (2.0 * step);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return jac;
}

std::vector<double> eigenvalue_real_parts(const OdeSystem& system,
                                          std::span<const double> x, double t_eval) {
  const std::vector<double> jac = finite_difference_jacobian(system, x, t_eval);
  return detail::eigen_real_parts(jac, system.dim);
}

Stability stability_from_real_parts(std::span<const double> real_parts) {
  return detail::classify_from_real_parts(
      std::vector<double>(real_parts.begin(), real_parts.end()));
}

Equilibrium classify_stability(const OdeSystem& system,
                               std::span<const double> point, double t_eval) {
  constexpr double kResidualGate = 1e-6;
  Equilibrium eq;
  eq.point.assign(point.begin(), point.end());
  eq.residual = system.residual_inf(t_eval, point);
  if (!(eq.residual <= kResidualGate))
    throw NotAnEquilibrium("residual " + std::to_string(eq.residual) +
                           " exceeds the near-equilibrium threshold 1e-6");
  const std::vector<double> jac = finite_difference_jacobian(system, point, t_eval);
  eq.eigen_real_parts = detail::eigen_real_parts(jac, system.dim);
  eq.stability = detail::classify_from_real_parts(eq.eigen_real_parts);
  return eq;
}

NewtonResult newton_refine(const OdeSystem& system, std::span<const double> x0,
                           double t_eval, int max_iterations) {
  const auto n = static_cast<std::size_t>(system.dim);
  NewtonResult result;
  result.point.assign(x0.begin(), x0.end());

  std::vector<double> f(n), trial(n), delta;
  auto norm2 = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double q : v) acc += q * q;
    return acc;
  };
  system.rhs(t_eval, result.point, f);
  double f2 = norm2(f);

  for (int iter = 0; iter < max_iterations; ++iter) {
    result.iterations = iter;
    double finf = 0.0;
    for (double q : f) finf = std::max(finf, std::abs(q));
    result.residual = finf;
    if (finf <= 1e-12) {
      result.converged = true;
      return result;
    }
    std::vector<double> jac = finite_difference_jacobian(system, result.point, t_eval);
    std::vector<double> rhs(f);
    for (double& q : rhs) q = -q;
    if (!detail::solve_linear(std::move(jac), std::move(rhs), system.dim, delta))
      return result;  // singular Jacobian; give up on this start

    // backtracking line search on ‖f‖²
    double lambda = 1.0;
    bool improved = false;
    for (int back = 0; back < 16; ++back) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = result.point[i] + lambda * delta[i];
      bool finite = true;
      for (double q : trial)
        if (!std::isfinite(q)) finite = false;
      if (finite) {
        std::vector<double> ftrial(n);
        system.rhs(t_eval, trial, ftrial);
        const double ft2 = norm2(ftrial);
        if (std::isfinite(ft2) && ft2 <= (1.0 - 1e-4 * lambda) * f2) {
          result.point = trial;
          f = std::move(ftrial);
          f2 = ft2;
          improved = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!improved) {
      double finf2 = 0.0;
      for (double q : f) finf2 = std::max(finf2, std::abs(q));
      result.residual = finf2;
      result.converged = finf2 <= 1e-9;
      return result;
    }
  }
  double finf = 0.0;
  for (double q : f) finf = std::max(finf, std::abs(q));
  result.residual = finf;
  result.converged = finf <= 1e-9;
  return result;
}

namespace {

// Additive quasi-random sequence from the generalized golden ratio
// (unique positive root of x^(dim+1) = x + 1).
std::vector<double> quasi_random_point(int dim, int index) {
  double phi = 1.5;
  for (int it = 0; it < 64; ++it)
    phi = std::pow(1.0 + phi, 1.0 / (dim + 1.0));
  std::vector<double> p(static_cast<std::size_t>(dim));
  double a = 1.0;
  for (int j = 0; j < dim; ++j) {
    a /= phi;
    double v = 0.5 + a * (index + 1);
    p[static_cast<std::size_t>(j)] = v - std::floor(v);
  }
  return p;
}

double relative_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max({den, std::abs(a[i]), std::abs(b[i])});
  }
  return num / den;
}

}  // namespace

std::vector<Equilibrium> find_equilibria(const OdeSystem& system, const Box& box,
                                         int n_starts, double t_eval) {
  box.validate(system.dim);
  if (n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
  const auto n = static_cast<std::size_t>(system.dim);

  std::vector<std::vector<double>> points;
  std::vector<double> residuals;
  for (int s = 0; s < n_starts; ++s) {
    std::vector<double> seed = quasi_random_point(system.dim, s);
    for (std::size_t i = 0; i < n; ++i)
      seed[i] = box.lo[i] + seed[i] * (box.hi[i] - box.lo[i]);
    NewtonResult refined = newton_refine(system, seed, t_eval);
    if (!refined.converged || !(refined.residual <= 1e-9)) continue;

    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double pad = 1e-9 * std::max(1.0, std::abs(box.hi[i]) + std::abs(box.lo[i]));
      if (refined.point[i] < box.lo[i] - pad || refined.point[i] > box.hi[i] + pad)
        inside = false;
    }
    if (!inside) continue;

    bool duplicate = false;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (relative_distance(points[k], refined.point) <= 1e-6) {
        duplicate = true;
        if (refined.residual < residuals[k]) {
          points[k] = refined.point;
          residuals[k] = refined.residual;
        }
        break;
      }
    }
    if (!duplicate) {
      points.push_back(refined.point);
      residuals.push_back(refined.residual);
    }
  }

  std::vector<Equilibrium> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(classify_stability(system, p, t_eval));
  std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
    return std::lexicographical_compare(a.point.begin(), a.point.end(),
                                        b.point.begin(), b.point.end());
  });
  return out;
}

}  // namespace biocircuit::ode
