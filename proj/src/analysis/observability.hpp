#pragma once

#include <Eigen/Dense>

namespace swa::analysis {

/// Combined swarm model with relative-position measurements only. States are
/// ordered [x_i, y_i, xdot_i, ydot_i] per UAV.
struct CombinedSystem {
  int n = 0;
  double dt = 0.0;
  Eigen::MatrixXd transition;   // 4n x 4n, block diagonal [I, dt I; 0, I]
  Eigen::MatrixXd measurement;  // 2 n (n-1) x 4n, one row pair per ordered pair (k, l)
};

// Throws kInvalidArgument for n < 2 or dt <= 0.
CombinedSystem build_combined_system(int n, double dt);

// Appends an absolute position measurement (2 rows) for UAV `index`.
CombinedSystem with_absolute_position(const CombinedSystem& sys, int index);

// [H; H F; ...; H F^(d-1)], d = dim(x).
Eigen::MatrixXd observability_matrix(const CombinedSystem& sys);

int observability_rank(const CombinedSystem& sys);

// The four vectors 1_n (x) e_j, as columns of a 4n x 4 matrix.
Eigen::MatrixXd uniform_translation_basis(int n);

struct NullSpaceCheck {
  int rank = 0;
  int nullity = 0;
  double worst_ratio = 0.0;  // max_j |O v_j| / (|O| |v_j|)
  bool basis_in_null_space = false;
  bool spans_null_space = false;

  bool ok() const { return basis_in_null_space && spans_null_space; }
};

// Each uniform-translation vector must satisfy |O v| <= 1e-9 |O| |v|, and
// together they must span the null space (nullity 4, linearly independent).
NullSpaceCheck unobservable_basis_check(const CombinedSystem& sys);

// True when |O v| <= tol |O| |v|.
bool in_null_space(const Eigen::MatrixXd& o, const Eigen::VectorXd& v, double tol = 1e-9);

}  // namespace swa::analysis
