#include "raman/linalg.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace raman {

Svd full_svd(const Eigen::MatrixXcd& m) {
  constexpr auto opts = Eigen::ComputeFullU | Eigen::ComputeFullV;
  {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, opts);
    Svd r{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    if (r.u.allFinite() && r.v.allFinite() && r.s.allFinite()) {
      const Eigen::Index k = r.s.size();
      const double scale = std::max(1.0, m.cwiseAbs().maxCoeff()) * static_cast<double>(std::max(m.rows(), m.cols()));
      const double err = (m - r.u.leftCols(k) * r.s.asDiagonal() * r.v.leftCols(k).adjoint()).cwiseAbs().maxCoeff();
      const double ortho = std::max(
          (r.u.adjoint() * r.u - Eigen::MatrixXcd::Identity(r.u.cols(), r.u.cols())).cwiseAbs().maxCoeff(),
          (r.v.adjoint() * r.v - Eigen::MatrixXcd::Identity(r.v.cols(), r.v.cols())).cwiseAbs().maxCoeff());
      if (err < 1e-12 * scale && ortho < 1e-12 * static_cast<double>(m.rows() + m.cols())) return r;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, opts);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  Eigen::VectorXd s = svd.singularValues();
  if (s.allFinite() && (s.size() == 0 || s(0) <= m.norm() * (1.0 + 1e-12))) return s;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
}

double op_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double weighted_norm2(const Eigen::VectorXcd& f, double weight) {
  return f.squaredNorm() * weight;
}

cd weighted_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double weight) {
  return a.dot(b) * weight;
}

Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXcd& modes, double weight) {
  return modes.adjoint() * modes * weight;
}

cd canonical_phase(const Eigen::VectorXcd& ref) {
  Eigen::Index k = 0;
  if (ref.size() == 0 || ref.cwiseAbs().maxCoeff(&k) == 0.0) return 1.0;
  return std::conj(ref(k)) / std::abs(ref(k));
}

}  // namespace raman
