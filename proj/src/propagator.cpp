#include "raman/propagator.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "raman/errors.hpp"
#include "raman/parallel.hpp"

namespace raman {

const char* to_string(Pass pass) {
  return pass == Pass::stokes ? "stokes" : "antistokes";
}

namespace {

// Trapezoidal update of one space-time cell on scaled amplitudes
// x = sqrt(dt) * optical, y = sqrt(dz) * atomic:
//   x' = diag x + up y,   y' = down x + diag y.
// This is the Cayley transform of the local generator, so each cell is exactly
// pseudo-unitary (Stokes) or unitary (anti-Stokes).
struct CellMap {
  cd diag;
  cd up;
  cd down;
};

class CellTable {
 public:
  CellTable(const SimulationGrid& grid, const PumpConfig& pump, Pass pass)
      : nt_(grid.nt()), cells_(static_cast<std::size_t>(grid.nz()) * grid.nt()) {
    pump.validate();
    const double root_area = std::sqrt(grid.dz() * grid.dt());
    for (int i = 0; i < grid.nz(); ++i) {
      for (int j = 0; j < grid.nt(); ++j) {
        const cd kappa = pump.g0 * pump_envelope(pump, grid.length(), grid.z(i), grid.t(j)) * root_area;
        const double k2 = std::norm(kappa);
        CellMap& c = cells_[static_cast<std::size_t>(i) * nt_ + j];
        if (pass == Pass::stokes) {
          const double den = 1.0 - k2 / 4.0;
          if (!(den > 0.0))
            throw NumericalFailure(
                fmt::format("coupling per cell {} too large for the grid; refine it", std::sqrt(k2)));
          c = {(1.0 + k2 / 4.0) / den, kappa / den, std::conj(kappa) / den};
        } else {
          const double den = 1.0 + k2 / 4.0;
          c = {(1.0 - k2 / 4.0) / den, kappa / den, -std::conj(kappa) / den};
        }
      }
    }
  }

  const CellMap& operator()(int i, int j) const {
    return cells_[static_cast<std::size_t>(i) * nt_ + j];
  }

 private:
  int nt_;
  std::vector<CellMap> cells_;
};

// Marches every run (one per row of `x` / `y`) through the grid in z.
// x: runs x nt optical samples, y: runs x nz atomic samples.
void march(const SimulationGrid& grid, const CellTable& table, Eigen::MatrixXcd& x,
           Eigen::MatrixXcd& y, long first_column) {
  const Eigen::Index runs = x.rows();
  Eigen::VectorXcd tmp(runs);
  for (int i = 0; i < grid.nz(); ++i) {
    auto atom = y.col(i);
    for (int j = 0; j < grid.nt(); ++j) {
      const CellMap& c = table(i, j);
      if (c.up == 0.0 && c.down == 0.0 && c.diag == 1.0) continue;
      auto light = x.col(j);
      tmp = c.diag * light + c.up * atom;
      atom = c.down * light + c.diag * atom;
      light = tmp;
    }
    if (!atom.allFinite() || !x.allFinite()) {
      Eigen::Index bad = 0;
      for (Eigen::Index r = 0; r < runs; ++r) {
        if (!x.row(r).allFinite() || !std::isfinite(std::abs(atom(r)))) {
          bad = r;
          break;
        }
      }
      throw NumericalFailure(
          fmt::format("non-finite field after z-slice {} in impulse column {}", i, first_column + bad),
          first_column + bad);
    }
  }
}

FieldState evolve(const SimulationGrid& grid, const PumpConfig& pump, const FieldState& in,
                  Pass pass) {
  if (in.alpha.size() != grid.nt() || in.beta.size() != grid.nz())
    throw std::invalid_argument(fmt::format("field sizes {}x{} do not match grid {}x{}",
                                            in.alpha.size(), in.beta.size(), grid.nt(), grid.nz()));
  pump.validate();
  // No coupling: skip the scaling round trip so the inputs come back bit for bit.
  if (pump.g0 == 0.0) return in;
  const CellTable table(grid, pump, pass);
  const double sdt = std::sqrt(grid.dt());
  const double sdz = std::sqrt(grid.dz());
  Eigen::MatrixXcd x = (in.alpha * sdt).transpose();
  Eigen::MatrixXcd y = pass == Pass::stokes ? Eigen::MatrixXcd((in.beta.conjugate() * sdz).transpose())
                                            : Eigen::MatrixXcd((in.beta * sdz).transpose());
  march(grid, table, x, y, -1);
  FieldState out;
  out.alpha = x.row(0).transpose() / sdt;
  out.beta = pass == Pass::stokes ? Eigen::VectorXcd(y.row(0).adjoint() / sdz)
                                  : Eigen::VectorXcd(y.row(0).transpose() / sdz);
  return out;
}

}  // namespace

FieldState evolve_stokes(const SimulationGrid& grid, const PumpConfig& pump, const FieldState& in) {
  return evolve(grid, pump, in, Pass::stokes);
}

FieldState evolve_antistokes(const SimulationGrid& grid, const PumpConfig& pump,
                             const FieldState& in) {
  return evolve(grid, pump, in, Pass::antistokes);
}

GreenSet build_green(const SimulationGrid& grid, const PumpConfig& pump, Pass pass, unsigned jobs) {
  const CellTable table(grid, pump, pass);
  const int nt = grid.nt();
  const int nz = grid.nz();
  GreenSet g{pass == Pass::stokes ? GreenKind::stokes_squeezer : GreenKind::antistokes_beamsplitter,
             grid,
             pump,
             Eigen::MatrixXcd(nt, nt),
             Eigen::MatrixXcd(nz, nz),
             Eigen::MatrixXcd(nt, nz),
             Eigen::MatrixXcd(nz, nt)};

  // Columns [0, nt) are optical impulses at t_j, [nt, nt + nz) atomic impulses at z_j.
  parallel_chunks(nt + nz, jobs, [&](long first, long last) {
    const long runs = last - first;
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(runs, nt);
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(runs, nz);
    for (long r = 0; r < runs; ++r) {
      const long col = first + r;
      if (col < nt)
        x(r, col) = 1.0;
      else
        y(r, col - nt) = 1.0;
    }
    march(grid, table, x, y, first);
    // Disjoint columns per chunk, so concurrent writes never overlap.
    for (long r = 0; r < runs; ++r) {
      const long col = first + r;
      if (col < nt) {
        g.kaa.col(col) = x.row(r).transpose();
        if (pass == Pass::stokes)
          g.kba.col(col) = y.row(r).adjoint();
        else
          g.kba.col(col) = -y.row(r).transpose();
      } else {
        g.kab.col(col - nt) = x.row(r).transpose();
        if (pass == Pass::stokes)
          g.kbb.col(col - nt) = y.row(r).adjoint();
        else
          g.kbb.col(col - nt) = y.row(r).transpose();
      }
    }
  });
  return g;
}

Eigen::MatrixXcd stokes_source_kernel(const SimulationGrid& grid, const PumpConfig& pump,
                                      unsigned jobs) {
  const CellTable table(grid, pump, Pass::stokes);
  Eigen::MatrixXcd kab(grid.nt(), grid.nz());
  parallel_chunks(grid.nz(), jobs, [&](long first, long last) {
    const long runs = last - first;
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(runs, grid.nt());
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(runs, grid.nz());
    for (long r = 0; r < runs; ++r) y(r, first + r) = 1.0;
    march(grid, table, x, y, grid.nt() + first);
    for (long r = 0; r < runs; ++r) kab.col(first + r) = x.row(r).transpose();
  });
  return kab;
}

double stokes_photon_number(const SimulationGrid& grid, const PumpConfig& pump, unsigned jobs) {
  return stokes_source_kernel(grid, pump, jobs).squaredNorm();
}

}  // namespace raman

namespace raman {

Calibration calibrate_coupling(const SimulationGrid& grid, PumpConfig pump, double target,
                               double rel_tol, int max_steps, unsigned jobs) {
  if (!(target > 0.0)) throw std::invalid_argument("calibration target must be positive");
  const double log_target = std::log(target);
  Calibration cal;
  // log N, or +inf where the coupling is too strong for the grid.
  auto log_photons = [&](double g0) {
    pump.g0 = g0;
    try {
      const double n = stokes_photon_number(grid, pump, jobs);
      return n > 0.0 ? std::log(n) : -HUGE_VAL;
    } catch (const NumericalFailure&) {
      return HUGE_VAL;
    }
  };

  double lo = 0.0, hi = 1.0 / std::sqrt(grid.length() * pump.tau_p);
  double f_hi = log_photons(hi);
  while (f_hi < log_target) {
    lo = hi;
    hi *= 2.0;
    f_hi = log_photons(hi);
    if (++cal.bracket_steps > 60) throw NumericalFailure("could not bracket the photon-number target");
  }
  for (int step = 1; step <= max_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double f = log_photons(mid);
    cal.bisection_steps = step;
    if (std::abs(f - log_target) < std::log1p(rel_tol)) {
      cal.g0 = mid;
      cal.photons = std::exp(f);
      return cal;
    }
    (f < log_target ? lo : hi) = mid;
  }
  throw NumericalFailure(fmt::format("calibration did not reach N = {} within {} bisection steps "
                                     "(bracket [{}, {}])",
                                     target, max_steps, lo, hi));
}

}  // namespace raman
