#pragma once

#include <Eigen/Dense>

#include "raman/grid.hpp"

namespace raman {

// Full SVD m = u diag(s) v^H, s descending. Divide-and-conquer first; falls
// back to one-sided Jacobi when that result is not finite or does not
// reconstruct m (it breaks down on exactly repeated zero singular values).
struct Svd {
  Eigen::MatrixXcd u;
  Eigen::VectorXd s;
  Eigen::MatrixXcd v;
};
Svd full_svd(const Eigen::MatrixXcd& m);
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);

// Largest singular value.
double op_norm(const Eigen::MatrixXcd& m);

// Quadrature-weighted norm^2 and inner product <a, b> = sum conj(a) b w.
double weighted_norm2(const Eigen::VectorXcd& f, double weight);
cd weighted_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double weight);

// Gram matrix of the columns of `modes` under a uniform quadrature weight.
Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXcd& modes, double weight);

// Multiply by the phase that makes the largest-magnitude entry of `ref` real
// and positive; returns that phase factor.
cd canonical_phase(const Eigen::VectorXcd& ref);

}  // namespace raman
