#include "raman/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "raman/errors.hpp"
#include "raman/linalg.hpp"

namespace raman {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

double ResidualReport::worst() const {
  double w = 0.0;
  for (const auto& [name, value] : entries) w = std::max(w, value);
  return w;
}

double ResidualReport::get(const std::string& name) const {
  for (const auto& [n, value] : entries)
    if (n == name) return value;
  throw std::out_of_range("no residual named " + name);
}

double ModePair::occupancy() const {
  const double s = std::sinh(zeta);
  return s * s;
}

namespace {

double identity_defect(const MatrixXcd& m) {
  return op_norm(m - MatrixXcd::Identity(m.rows(), m.cols()));
}

double gram_defect(const MatrixXcd& cols) { return identity_defect(cols.adjoint() * cols); }

void check_residuals(const ResidualReport& report, double tolerance, double scale,
                     const char* what) {
  const double limit = tolerance * std::max(1.0, scale);
  for (const auto& [name, value] : report.entries) {
    if (!(value <= limit))
      throw DecompositionInconsistency(
          fmt::format("{}: residual {} = {:.3e} exceeds {:.3e}", what, name, value, limit),
          report.worst());
  }
}

}  // namespace

SqueezerDecomposition bloch_messiah(const GreenSet& g, const DecompositionOptions& opt) {
  if (g.kind != GreenKind::stokes_squeezer)
    throw std::invalid_argument("bloch_messiah needs a Stokes Green set");
  const Eigen::Index nt = g.kaa.rows();
  const Eigen::Index nz = g.kbb.rows();

  const Svd svd = full_svd(g.kab);
  const VectorXd s = svd.s;
  const Eigen::Index m = s.size();
  MatrixXcd Q = svd.u;
  MatrixXcd V = svd.v;
  for (Eigen::Index n = 0; n < m; ++n) {
    const cd phase = canonical_phase(Q.col(n));
    Q.col(n) *= phase;
    V.col(n) *= phase;
  }

  VectorXd sq = VectorXd::Zero(nt), sv = VectorXd::Zero(nz);
  sq.head(m) = s;
  sv.head(m) = s;
  const VectorXd cq = (1.0 + sq.array().square()).sqrt();
  const VectorXd cv = (1.0 + sv.array().square()).sqrt();

  // cosh >= 1, so dividing by it is always well conditioned.
  const MatrixXcd P = g.kaa.adjoint() * Q * cq.cwiseInverse().asDiagonal();
  const MatrixXcd S = g.kbb * V.conjugate() * cv.cwiseInverse().asDiagonal();

  SqueezerDecomposition out;
  auto& r = out.residuals;
  r.add("kaa", op_norm(g.kaa - Q * cq.asDiagonal() * P.adjoint()));
  r.add("kab", op_norm(g.kab - Q.leftCols(m) * s.asDiagonal() * V.leftCols(m).adjoint()));
  r.add("kbb", op_norm(g.kbb - S * cv.asDiagonal() * V.transpose()));
  r.add("kba", op_norm(g.kba - S.leftCols(m) * s.asDiagonal() * P.leftCols(m).transpose()));
  r.add("gram_psi_out", gram_defect(Q));
  r.add("gram_psi_in", gram_defect(P));
  r.add("gram_phi_in", gram_defect(V));
  r.add("gram_phi_out", gram_defect(S));
  check_residuals(r, opt.tolerance, cq.maxCoeff(), "Bloch-Messiah reduction");

  out.total_photons = s.squaredNorm();
  const double cutoff = opt.truncate ? opt.floor * out.total_photons : 0.0;
  const double rdt = 1.0 / std::sqrt(g.grid.dt());
  const double rdz = 1.0 / std::sqrt(g.grid.dz());
  for (Eigen::Index n = 0; n < m; ++n) {
    if (s(n) * s(n) < cutoff) {
      ++out.dropped;
      continue;
    }
    ModePair p;
    p.index = static_cast<int>(out.modes.size()) + 1;
    p.zeta = std::asinh(s(n));
    p.psi_out = Q.col(n).conjugate() * rdt;
    p.psi_in = P.col(n).conjugate() * rdt;
    p.phi_in = V.col(n) * rdz;
    p.phi_out = S.col(n).conjugate() * rdz;
    out.modes.push_back(std::move(p));
  }
  return out;
}

BeamsplitterDecomposition beamsplitter_reduce(const GreenSet& g, double tolerance) {
  if (g.kind != GreenKind::antistokes_beamsplitter)
    throw std::invalid_argument("beamsplitter_reduce needs an anti-Stokes Green set");
  const Eigen::Index nt = g.kaa.rows();
  const Eigen::Index nz = g.kbb.rows();
  const Eigen::Index m = std::min(nt, nz);

  const Svd sab = full_svd(g.kab);
  const VectorXd& s_ab = sab.s;
  const Eigen::Index h = (s_ab.array() > std::sqrt(0.5)).count();

  MatrixXcd Q(nt, nt), P(nt, nt), R(nz, nz), S(nz, nz);
  VectorXd c(m), s(m);

  // Channels with eta > 1/2 come from the small singular values of kaa, the
  // rest from kab: each route divides by a number >= 1/sqrt(2).
  if (h > 0) {
    const Svd saa = full_svd(g.kaa);
    for (Eigen::Index k = 0; k < h; ++k) {
      const Eigen::Index idx = nt - 1 - k;
      Q.col(k) = saa.u.col(idx);
      P.col(k) = saa.v.col(idx);
      c(k) = saa.s(idx);
      VectorXcd rr = g.kab.adjoint() * Q.col(k);
      s(k) = rr.norm();
      R.col(k) = rr / s(k);
      S.col(k) = g.kba * P.col(k) / s(k);
    }
  }
  for (Eigen::Index k = h; k < m; ++k) {
    Q.col(k) = sab.u.col(k);
    R.col(k) = sab.v.col(k);
    s(k) = s_ab(k);
    VectorXcd pp = g.kaa.adjoint() * Q.col(k);
    c(k) = pp.norm();
    P.col(k) = pp / c(k);
    S.col(k) = g.kbb * R.col(k) / c(k);
  }
  // Unpaired complement (pass-through light or untouched atoms).
  for (Eigen::Index k = m; k < nt; ++k) {
    Q.col(k) = sab.u.col(k);
    P.col(k) = g.kaa.adjoint() * Q.col(k);
  }
  for (Eigen::Index k = m; k < nz; ++k) {
    R.col(k) = sab.v.col(k);
    S.col(k) = g.kbb * R.col(k);
  }

  VectorXd theta(m);
  for (Eigen::Index k = 0; k < m; ++k) theta(k) = std::atan2(s(k), c(k));

  std::vector<Eigen::Index> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return theta(a) > theta(b); });
  {
    const MatrixXcd q0 = Q, p0 = P, r0 = R, s0 = S;
    const VectorXd t0 = theta;
    for (Eigen::Index k = 0; k < m; ++k) {
      Q.col(k) = q0.col(order[k]);
      P.col(k) = p0.col(order[k]);
      R.col(k) = r0.col(order[k]);
      S.col(k) = s0.col(order[k]);
      theta(k) = t0(order[k]);
    }
  }

  // Degenerate clusters: any basis is valid, pick the one whose Psi_out are
  // ordered by time centroid.
  const VectorXd tgrid = g.grid.t_samples();
  for (Eigen::Index first = 0; first < m;) {
    Eigen::Index last = first + 1;
    while (last < m && theta(first) - theta(last) < 1e-10) ++last;
    const Eigen::Index k = last - first;
    if (k > 1) {
      theta.segment(first, k).setConstant(theta.segment(first, k).mean());
      const MatrixXcd Qc = Q.middleCols(first, k);
      const MatrixXcd H = Qc.adjoint() * tgrid.asDiagonal() * Qc;
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (H + H.adjoint()));
      const MatrixXcd& W = es.eigenvectors();
      Q.middleCols(first, k) = Qc * W;
      P.middleCols(first, k) = P.middleCols(first, k) * W;
      R.middleCols(first, k) = R.middleCols(first, k) * W;
      S.middleCols(first, k) = S.middleCols(first, k) * W;
    }
    first = last;
  }

  for (Eigen::Index k = 0; k < m; ++k) {
    const cd phase = canonical_phase(Q.col(k));
    Q.col(k) *= phase;
    P.col(k) *= phase;
    R.col(k) *= phase;
    S.col(k) *= phase;
    c(k) = std::cos(theta(k));
    s(k) = std::sin(theta(k));
  }

  VectorXd cq = VectorXd::Ones(nt), cr = VectorXd::Ones(nz);
  cq.head(m) = c;
  cr.head(m) = c;

  BeamsplitterDecomposition out;
  auto& r = out.residuals;
  r.add("kaa", op_norm(g.kaa - Q * cq.asDiagonal() * P.adjoint()));
  r.add("kab", op_norm(g.kab - Q.leftCols(m) * s.asDiagonal() * R.leftCols(m).adjoint()));
  r.add("kba", op_norm(g.kba - S.leftCols(m) * s.asDiagonal() * P.leftCols(m).adjoint()));
  r.add("kbb", op_norm(g.kbb - S * cr.asDiagonal() * R.adjoint()));
  r.add("gram_Psi_out", gram_defect(Q));
  r.add("gram_Psi_in", gram_defect(P));
  r.add("gram_Phi_in", gram_defect(R));
  r.add("gram_Phi_out", gram_defect(S));
  check_residuals(r, tolerance, 1.0, "beamsplitter reduction");

  const double rdt = 1.0 / std::sqrt(g.grid.dt());
  const double rdz = 1.0 / std::sqrt(g.grid.dz());
  out.modes.reserve(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    ReadoutModePair p;
    p.index = static_cast<int>(k) + 1;
    p.theta = theta(k);
    p.eta = std::clamp(s(k) * s(k), 0.0, 1.0);
    p.Psi_out = Q.col(k).conjugate() * rdt;
    p.Psi_in = P.col(k).conjugate() * rdt;
    p.Phi_in = R.col(k).conjugate() * rdz;
    p.Phi_out = S.col(k).conjugate() * rdz;
    out.modes.push_back(std::move(p));
  }
  return out;
}

ResidualReport verify_structure(const GreenSet& g) {
  ResidualReport r;
  const auto& aa = g.kaa;
  const auto& ab = g.kab;
  const auto& ba = g.kba;
  const auto& bb = g.kbb;
  if (g.kind == GreenKind::stokes_squeezer) {
    // T eta T^H = eta and T^H eta T = eta for T = [[aa, ab], [conj ba, conj bb]].
    r.add("aa_aaH-ab_abH", identity_defect(aa * aa.adjoint() - ab * ab.adjoint()));
    r.add("bb_bbH-ba_baH", identity_defect(bb * bb.adjoint() - ba * ba.adjoint()));
    r.add("aa_baT-ab_bbT", op_norm(aa * ba.transpose() - ab * bb.transpose()));
    r.add("aaH_aa-baT_conj(ba)", identity_defect(aa.adjoint() * aa - ba.transpose() * ba.conjugate()));
    r.add("bbT_conj(bb)-abH_ab", identity_defect(bb.transpose() * bb.conjugate() - ab.adjoint() * ab));
    r.add("aaH_ab-baT_conj(bb)", op_norm(aa.adjoint() * ab - ba.transpose() * bb.conjugate()));
  } else {
    const Eigen::Index nt = aa.rows(), nz = bb.rows();
    MatrixXcd u(nt + nz, nt + nz);
    u << aa, ab, -ba, bb;
    r.add("UH_U", identity_defect(u.adjoint() * u));
    r.add("U_UH", identity_defect(u * u.adjoint()));
  }
  return r;
}

CoherenceModes coherence_modes(const GreenSet& g) {
  if (g.kind != GreenKind::stokes_squeezer)
    throw std::invalid_argument("coherence_modes needs a Stokes Green set");
  CoherenceModes out;
  {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g.kab * g.kab.adjoint());
    out.optical_occupancy = es.eigenvalues().reverse();
    out.optical_modes = es.eigenvectors().rowwise().reverse().conjugate() / std::sqrt(g.grid.dt());
  }
  {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g.kba * g.kba.adjoint());
    out.atomic_occupancy = es.eigenvalues().reverse();
    out.atomic_modes = es.eigenvectors().rowwise().reverse().conjugate() / std::sqrt(g.grid.dz());
  }
  return out;
}

}  // namespace raman
