#include "raman/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace raman {

const char* to_string(PumpShape shape) {
  switch (shape) {
    case PumpShape::gaussian: return "gaussian";
    case PumpShape::square: return "square";
  }
  return "unknown";
}

PumpShape pump_shape_from_string(const std::string& name) {
  if (name == "gaussian") return PumpShape::gaussian;
  if (name == "square") return PumpShape::square;
  throw std::invalid_argument(fmt::format("unknown pump shape '{}'", name));
}

void PumpConfig::validate() const {
  if (!(tau_p > 0) || !std::isfinite(tau_p))
    throw std::invalid_argument(fmt::format("pump duration must be positive, got {}", tau_p));
  if (!(g0 >= 0) || !std::isfinite(g0))
    throw std::invalid_argument(fmt::format("coupling must be non-negative, got {}", g0));
  if (!std::isfinite(delta_beta))
    throw std::invalid_argument("group velocity mismatch must be finite");
}

SimulationGrid::SimulationGrid(double length, double half_window, int nz, int nt)
    : length_(length), half_window_(half_window), nz_(nz), nt_(nt) {
  if (!(length > 0) || !std::isfinite(length))
    throw std::invalid_argument(fmt::format("medium length must be positive, got {}", length));
  if (!(half_window > 0) || !std::isfinite(half_window))
    throw std::invalid_argument(fmt::format("time window must be positive, got {}", half_window));
  if (nz < 2 || nt < 2)
    throw std::invalid_argument(fmt::format("grid needs at least 2x2 points, got {}x{}", nz, nt));
}

Eigen::VectorXd SimulationGrid::z_samples() const {
  Eigen::VectorXd z(nz_);
  for (int i = 0; i < nz_; ++i) z(i) = this->z(i);
  return z;
}

Eigen::VectorXd SimulationGrid::t_samples() const {
  Eigen::VectorXd t(nt_);
  for (int j = 0; j < nt_; ++j) t(j) = this->t(j);
  return t;
}

bool SimulationGrid::shares_z_axis(const SimulationGrid& other) const {
  return nz_ == other.nz_ && length_ == other.length_;
}

SimulationGrid make_grid(double length, double tau_p, double delta_beta, int nz, int nt,
                         double margin) {
  if (!(length > 0)) throw std::invalid_argument("medium length must be positive");
  if (!(tau_p > 0)) throw std::invalid_argument("pump duration must be positive");
  if (nz <= 0 || nt <= 0) throw std::invalid_argument("grid sizes must be positive");
  if (!(margin >= 2)) throw std::invalid_argument(fmt::format("window margin must be >= 2, got {}", margin));
  const double walkoff = std::abs(length * delta_beta / tau_p);
  return SimulationGrid(length, tau_p * (margin + walkoff / 2.0), nz, nt);
}

cd pump_envelope(const PumpConfig& cfg, double length, double z, double t) {
  if (!(z >= 0.0 && z <= length))
    throw std::invalid_argument(fmt::format("z = {} outside medium [0, {}]", z, length));
  // Pump centre sits at t = (z - L/2) delta_beta in the signal frame.
  const double u = (t - (z - length / 2.0) * cfg.delta_beta) / cfg.tau_p;
  switch (cfg.shape) {
    case PumpShape::gaussian: return std::exp(-2.0 * std::numbers::ln2 * u * u);
    case PumpShape::square: return std::abs(u) <= 0.5 ? 1.0 : 0.0;
  }
  return 0.0;
}

DimensionlessParams dimensionless(const PumpConfig& cfg, double length) {
  return {cfg.g0 * std::sqrt(length * cfg.tau_p), length * cfg.delta_beta / cfg.tau_p};
}

}  // namespace raman
