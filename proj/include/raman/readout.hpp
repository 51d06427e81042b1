#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "raman/decomposition.hpp"

namespace raman {

// Light and residual polarization produced by reading one stored atomic mode.
struct ReadoutResult {
  Eigen::VectorXcd sigma;    // over readout t-samples
  Eigen::VectorXcd epsilon;  // over z-samples
  double sigma_norm2 = 0.0;
  double residual = 0.0;  // 1 - eta = sum |epsilon|^2 dz
  int target_mode_index = 1;
};

struct OverlapMatrix {
  Eigen::MatrixXcd U;  // (readout input mode m, Stokes atomic output mode n)
  double delta_k = 0.0;
};

// U_mn = sum_z conj(phi_out_n) exp(-i delta_k z) Phi_in_m dz.
OverlapMatrix basis_overlap(const SimulationGrid& grid, const std::vector<ModePair>& stokes,
                            const std::vector<ReadoutModePair>& readout, double delta_k);

// Reads the normalized atomic mode `phi` with the anti-Stokes kernels.
// Throws std::invalid_argument if |phi| differs from 1 by more than 1e-6.
ReadoutResult readout_modes(const GreenSet& g, const Eigen::VectorXcd& phi);

// Same result from a single propagation run, without building kernels.
ReadoutResult readout_direct(const SimulationGrid& grid, const PumpConfig& pump,
                             const Eigen::VectorXcd& phi);

// Largest |<sigma_target, sigma_other>| over the other atomic modes.
double crosstalk_check(const GreenSet& g, const Eigen::VectorXcd& phi_target,
                       const std::vector<Eigen::VectorXcd>& phi_others);

struct ChainConfig {
  double length = 75.0;
  int nz = 200;
  int nt = 200;
  double margin = 3.0;
  PumpConfig stokes;
  PumpConfig readout;
  double delta_k = 0.0;
  int target_mode = 1;
  unsigned jobs = 0;
};

struct ChainResult {
  ReadoutResult readout;
  // Provenance.
  SimulationGrid stokes_grid;
  SimulationGrid readout_grid;
  DimensionlessParams stokes_params;
  DimensionlessParams readout_params;
  double total_photons = 0.0;
  double target_zeta = 0.0;
  ResidualReport stokes_structure;
  ResidualReport stokes_decomposition;
  ResidualReport readout_structure;
};

// Stokes pass -> Bloch-Messiah -> stored mode phi_out (target) -> phase
// exp(-i delta_k z) from the four-wave-mixing mismatch -> readout pass.
ChainResult full_chain(const ChainConfig& cfg);

// Readout residual for each coupling in `g0_values` with the other readout
// parameters fixed; points run on `jobs` threads.
std::vector<double> readout_sweep(const SimulationGrid& grid, const PumpConfig& pump,
                                  const Eigen::VectorXcd& phi, const std::vector<double>& g0_values,
                                  unsigned jobs = 0);

struct Minimum {
  double x;
  double y;
};

// Interior local minima of the sampled curve (xs ascending). With `f`, each
// is refined by successive parabolic interpolation inside its bracket;
// without, the parabola through the three bracketing samples is used.
std::vector<Minimum> locate_minima(const std::vector<double>& xs, const std::vector<double>& ys,
                                   const std::function<double(double)>& f = {});

// Sign changes of the real part of `f` after rotating it to canonical phase,
// counted only where |f| exceeds 1e-3 of its maximum.
int count_nodes(const Eigen::VectorXcd& f);

}  // namespace raman
