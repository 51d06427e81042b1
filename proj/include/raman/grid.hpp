#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace raman {

using cd = std::complex<double>;

enum class PumpShape { gaussian, square };

const char* to_string(PumpShape shape);
PumpShape pump_shape_from_string(const std::string& name);

// Pump pulse for one pass. Units: ps, ps/mm, (mm ps)^{-1/2}.
struct PumpConfig {
  double tau_p = 200.0;
  double delta_beta = 0.0;
  double g0 = 0.0;
  PumpShape shape = PumpShape::gaussian;

  void validate() const;
};

struct DimensionlessParams {
  double gamma;  // g0 * sqrt(L * tau_p)
  double delta;  // L * delta_beta / tau_p
};

/// Space-time window 0 < z < L, -T < t < T sampled at cell midpoints.
///
/// Cell (i, j) spans [i dz, (i+1) dz] x [-T + j dt, -T + (j+1) dt]; its centre
/// is (z(i), t(j)). Quadrature weights are the uniform cell widths.
class SimulationGrid {
 public:
  SimulationGrid(double length, double half_window, int nz, int nt);

  double length() const { return length_; }
  double half_window() const { return half_window_; }
  int nz() const { return nz_; }
  int nt() const { return nt_; }
  double dz() const { return length_ / nz_; }
  double dt() const { return 2.0 * half_window_ / nt_; }
  double z(int i) const { return (i + 0.5) * dz(); }
  double t(int j) const { return -half_window_ + (j + 0.5) * dt(); }
  Eigen::VectorXd z_samples() const;
  Eigen::VectorXd t_samples() const;

  // Same longitudinal discretization (length and nz).
  bool shares_z_axis(const SimulationGrid& other) const;

 private:
  double length_;
  double half_window_;
  int nz_;
  int nt_;
};

// Window half-width T = tau_p (margin + |L delta_beta / tau_p| / 2).
SimulationGrid make_grid(double length, double tau_p, double delta_beta, int nz, int nt,
                         double margin = 3.0);

// Normalized pump envelope A_p(z, t) in the signal frame; peak value 1.
cd pump_envelope(const PumpConfig& cfg, double length, double z, double t);

DimensionlessParams dimensionless(const PumpConfig& cfg, double length);

}  // namespace raman
