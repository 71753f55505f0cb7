#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace swa::analysis {

// Regularized lower incomplete gamma function P(a, x).
double regularized_lower_gamma(double a, double x);

double chi_square_cdf(double x, double dof);

// Inverse CDF by bisection on the incomplete gamma function, to 1e-10.
double chi_square_inverse_cdf(double p, double dof);

// e^T P^-1 e. Throws kSingularMatrix when P is not positive definite.
double nees(const Eigen::VectorXd& error, const Eigen::MatrixXd& cov);

struct AneesBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// r1 = C^-1(alpha/2, K n_x) / K, r2 = C^-1(1 - alpha/2, K n_x) / K.
AneesBounds anees_bounds(int runs, int state_dim, double alpha = 0.05);

struct ErrorSample {
  Eigen::VectorXd error;
  Eigen::MatrixXd cov;
};

struct AneesReport {
  std::vector<double> anees;  // per step
  AneesBounds bounds;
  double pass_fraction = 0.0;  // fraction of steps inside [r1, r2]
  int runs = 0;
  int state_dim = 0;

  // Fraction of steps in [first, end) inside the bounds.
  double pass_fraction_from(std::size_t first) const;
};

// runs[i][k] is run i at step k. Throws kInvalidArgument on misaligned runs.
AneesReport anees_series(std::span<const std::vector<ErrorSample>> runs, double alpha = 0.05);

// Same as anees_series but from precomputed NEES values.
AneesReport anees_from_nees(std::span<const std::vector<double>> nees_runs, int state_dim,
                            double alpha = 0.05);

}  // namespace swa::analysis
