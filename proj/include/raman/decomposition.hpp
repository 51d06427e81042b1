#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "raman/propagator.hpp"

namespace raman {

// Named operator-norm residuals, in a fixed order.
struct ResidualReport {
  std::vector<std::pair<std::string, double>> entries;

  void add(std::string name, double value) { entries.emplace_back(std::move(name), value); }
  double worst() const;
  double get(const std::string& name) const;  // throws std::out_of_range
};

// One two-mode squeezer. Mode functions are normalized with the grid weights:
// sum |psi|^2 dt = 1, sum |phi|^2 dz = 1.
struct ModePair {
  int index = 0;  // 1-based, descending zeta
  double zeta = 0.0;
  Eigen::VectorXcd psi_in, psi_out;  // over t
  Eigen::VectorXcd phi_in, phi_out;  // over z

  double occupancy() const;  // sinh^2 zeta
};

struct SqueezerDecomposition {
  std::vector<ModePair> modes;
  int dropped = 0;  // pairs below the truncation floor
  double total_photons = 0.0;
  ResidualReport residuals;
};

struct DecompositionOptions {
  // Drop pairs with sinh^2 zeta < floor * N_tot from the returned list.
  bool truncate = true;
  double floor = 1e-12;
  // Reconstruction tolerance relative to max(1, |K|).
  double tolerance = 1e-6;
};

// Bloch-Messiah reduction of a Stokes Green set:
//   kaa = sum cosh conj(psi_out) psi_in^T,   kab = sum sinh conj(psi_out) phi_in^H,
//   kbb = sum cosh conj(phi_out) phi_in^T,   kba = sum sinh conj(phi_out) psi_in^H
// (in scaled units). Throws DecompositionInconsistency when the extracted
// quadruples fail to reproduce the kernels.
SqueezerDecomposition bloch_messiah(const GreenSet& g, const DecompositionOptions& opt = {});

// One beamsplitter channel of the readout pass.
struct ReadoutModePair {
  int index = 0;  // 1-based, descending eta
  double eta = 0.0;
  double theta = 0.0;  // eta = sin^2 theta
  Eigen::VectorXcd Psi_in, Psi_out;  // over t
  Eigen::VectorXcd Phi_in, Phi_out;  // over z
};

struct BeamsplitterDecomposition {
  std::vector<ReadoutModePair> modes;
  ResidualReport residuals;
};

// Reduction of an anti-Stokes Green set into independent beamsplitters,
//   kaa = sum sqrt(1-eta) conj(Psi_out) Psi_in^T,  kab = sum sqrt(eta) conj(Psi_out) Phi_in^T,
//   kba = sum sqrt(eta) conj(Phi_out) Psi_in^T,    kbb = sum sqrt(1-eta) conj(Phi_out) Phi_in^T.
// Degenerate channels are rotated so that Psi_out has ascending time centroid.
BeamsplitterDecomposition beamsplitter_reduce(const GreenSet& g, double tolerance = 1e-6);

// Residuals of the defining identities of the set's kind. Never throws on
// bad data; a wrong kind is a programming error (std::invalid_argument).
ResidualReport verify_structure(const GreenSet& g);

// Eigenmodes of the first-order coherence of the output light (kab kab^H) and
// of the stored polarization (kba kba^H), descending. Columns are mode
// functions psi_out / phi_out up to phase.
struct CoherenceModes {
  Eigen::VectorXd optical_occupancy;
  Eigen::MatrixXcd optical_modes;  // nt x nt
  Eigen::VectorXd atomic_occupancy;
  Eigen::MatrixXcd atomic_modes;  // nz x nz
};

CoherenceModes coherence_modes(const GreenSet& g);

}  // namespace raman
