#include "analysis/consistency.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace swa::analysis {
namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEpsilon = 1e-16;

// Power series, converges quickly for x < a + 1.
double lower_gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), for x >= a + 1.
double upper_gamma_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "incomplete gamma: need a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return lower_gamma_series(a, x);
  return 1.0 - upper_gamma_fraction(a, x);
}

double chi_square_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return regularized_lower_gamma(0.5 * dof, 0.5 * x);
}

double chi_square_inverse_cdf(double p, double dof) {
  if (!(p > 0.0 && p < 1.0) || !(dof > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "chi-square inverse: need 0 < p < 1 and dof > 0");
  }
  double lo = 0.0;
  double hi = std::max(1.0, dof);
  while (chi_square_cdf(hi, dof) < p) hi *= 2.0;
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (chi_square_cdf(mid, dof) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double nees(const Eigen::VectorXd& error, const Eigen::MatrixXd& cov) {
  if (cov.rows() != error.size() || cov.cols() != error.size()) {
    fail(ErrorCode::kInvalidArgument, "nees: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success || !cov.allFinite()) {
    fail(ErrorCode::kSingularMatrix, "nees: covariance is not positive definite");
  }
  return error.dot(llt.solve(error));
}

AneesBounds anees_bounds(int runs, int state_dim, double alpha) {
  if (runs < 1 || state_dim < 1 || !(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "anees bounds: invalid parameters");
  }
  const double dof = static_cast<double>(runs) * state_dim;
  return {chi_square_inverse_cdf(alpha / 2.0, dof) / runs,
          chi_square_inverse_cdf(1.0 - alpha / 2.0, dof) / runs};
}

double AneesReport::pass_fraction_from(std::size_t first) const {
  if (first >= anees.size()) return 0.0;
  std::size_t inside = 0;
  for (std::size_t k = first; k < anees.size(); ++k) {
    if (anees[k] >= bounds.lower && anees[k] <= bounds.upper) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(anees.size() - first);
}

AneesReport anees_from_nees(std::span<const std::vector<double>> nees_runs, int state_dim,
                            double alpha) {
  if (nees_runs.empty()) fail(ErrorCode::kInvalidArgument, "anees: no runs");
  const std::size_t steps = nees_runs.front().size();
  for (const auto& run : nees_runs) {
    if (run.size() != steps) fail(ErrorCode::kInvalidArgument, "anees: misaligned run lengths");
  }
  AneesReport report;
  report.runs = static_cast<int>(nees_runs.size());
  report.state_dim = state_dim;
  report.bounds = anees_bounds(report.runs, state_dim, alpha);
  report.anees.assign(steps, 0.0);
  for (const auto& run : nees_runs) {
    for (std::size_t k = 0; k < steps; ++k) report.anees[k] += run[k];
  }
  for (double& v : report.anees) v /= report.runs;
  report.pass_fraction = report.pass_fraction_from(0);
  return report;
}

AneesReport anees_series(std::span<const std::vector<ErrorSample>> runs, double alpha) {
  if (runs.empty()) fail(ErrorCode::kInvalidArgument, "anees: no runs");
  if (runs.front().empty()) fail(ErrorCode::kInvalidArgument, "anees: empty run");
  const int state_dim = static_cast<int>(runs.front().front().error.size());
  std::vector<std::vector<double>> values;
  values.reserve(runs.size());
  for (const auto& run : runs) {
    std::vector<double> v;
    v.reserve(run.size());
    for (const auto& sample : run) v.push_back(nees(sample.error, sample.cov));
    values.push_back(std::move(v));
  }
  return anees_from_nees(values, state_dim, alpha);
}

}  // namespace swa::analysis
