#pragma once

#include <Eigen/Dense>

#include "raman/grid.hpp"

namespace raman {

enum class Pass { stokes, antistokes };
enum class GreenKind { stokes_squeezer, antistokes_beamsplitter };

const char* to_string(Pass pass);

// Classical stand-ins for the field operators: the optical envelope over the
// t-samples and the atomic polarization over the z-samples.
struct FieldState {
  Eigen::VectorXcd alpha;
  Eigen::VectorXcd beta;
};

// Stokes pass: returns (alpha(L, t), beta(z, T)) from (alpha(0, t), beta(z, -T)).
// The map is the classical form of
//   alpha_out = C_a alpha_in + S_a conj(beta_in),
//   beta_out  = C_b beta_in  + S_b conj(alpha_in).
FieldState evolve_stokes(const SimulationGrid& grid, const PumpConfig& pump, const FieldState& in);

// Anti-Stokes (readout) pass; number conserving.
//   c_out = C_c c_in + S_c d_in,  d_out = C_d d_in - S_d c_in.
FieldState evolve_antistokes(const SimulationGrid& grid, const PumpConfig& pump,
                             const FieldState& in);

/// Discretized Green kernels of one pass.
///
/// All four blocks act on amplitude vectors pre-multiplied by sqrt(dt)
/// (optical) or sqrt(dz) (atomic), so the continuum kernels are recovered as
/// C_a(t_i, t_j) = kaa(i, j) / dt, S_a(t_i, z_j) = kab(i, j) / sqrt(dt dz), etc.
///
/// Squeezer kind: [[kaa, kab], [conj(kba), conj(kbb)]] preserves
/// diag(1, -1). Beamsplitter kind: [[kaa, kab], [-kba, kbb]] is unitary.
struct GreenSet {
  GreenKind kind;
  SimulationGrid grid;
  PumpConfig pump;
  Eigen::MatrixXcd kaa;  // nt x nt  (C_a or C_c)
  Eigen::MatrixXcd kbb;  // nz x nz  (C_b or C_d)
  Eigen::MatrixXcd kab;  // nt x nz  (S_a or S_c)
  Eigen::MatrixXcd kba;  // nz x nt  (S_b or S_d)
};

// Impulse-response construction; columns are split across `jobs` threads
// (0 = hardware concurrency). Throws NumericalFailure with the column index
// if a run produces non-finite values.
GreenSet build_green(const SimulationGrid& grid, const PumpConfig& pump, Pass pass,
                     unsigned jobs = 0);

// Only the S_a block of the Stokes pass (one impulse run per z-sample). Its
// squared Frobenius norm is the mean Stokes photon number.
Eigen::MatrixXcd stokes_source_kernel(const SimulationGrid& grid, const PumpConfig& pump,
                                      unsigned jobs = 0);

// Mean number of Stokes photons scattered from vacuum, sum of |S_a|^2.
double stokes_photon_number(const SimulationGrid& grid, const PumpConfig& pump,
                            unsigned jobs = 0);

}  // namespace raman

namespace raman {

struct Calibration {
  double g0 = 0.0;
  double photons = 0.0;
  int bracket_steps = 0;    // doublings to enclose the target
  int bisection_steps = 0;
};

// Finds g0 with stokes_photon_number = target (relative error < rel_tol) by
// bisection on log N over a bracket grown by doubling. The grid does not
// depend on g0. Throws NumericalFailure if `max_steps` bisections do not
// converge.
Calibration calibrate_coupling(const SimulationGrid& grid, PumpConfig pump, double target,
                               double rel_tol = 1e-3, int max_steps = 40, unsigned jobs = 0);

}  // namespace raman
