#include "raman/readout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "raman/linalg.hpp"
#include "raman/parallel.hpp"

namespace raman {

using Eigen::VectorXcd;

namespace {

void require_normalized(const SimulationGrid& grid, const VectorXcd& phi) {
  if (phi.size() != grid.nz())
    throw std::invalid_argument(
        fmt::format("atomic mode has {} samples, grid has nz = {}", phi.size(), grid.nz()));
  const double n2 = weighted_norm2(phi, grid.dz());
  if (std::abs(n2 - 1.0) > 1e-6)
    throw std::invalid_argument(fmt::format("atomic mode is not normalized (norm^2 = {})", n2));
}

}  // namespace

OverlapMatrix basis_overlap(const SimulationGrid& grid, const std::vector<ModePair>& stokes,
                            const std::vector<ReadoutModePair>& readout, double delta_k) {
  if (stokes.empty() || readout.empty())
    throw std::invalid_argument("basis_overlap needs two nonempty mode lists");
  const Eigen::Index nz = grid.nz();
  Eigen::MatrixXcd a(nz, static_cast<Eigen::Index>(stokes.size()));
  Eigen::MatrixXcd b(nz, static_cast<Eigen::Index>(readout.size()));
  for (std::size_t n = 0; n < stokes.size(); ++n) {
    if (stokes[n].phi_out.size() != nz) throw std::invalid_argument("Stokes mode not on this z-grid");
    a.col(static_cast<Eigen::Index>(n)) = stokes[n].phi_out;
  }
  for (std::size_t m = 0; m < readout.size(); ++m) {
    if (readout[m].Phi_in.size() != nz) throw std::invalid_argument("readout mode not on this z-grid");
    b.col(static_cast<Eigen::Index>(m)) = readout[m].Phi_in;
  }
  VectorXcd phase(nz);
  for (Eigen::Index i = 0; i < nz; ++i) phase(i) = std::polar(1.0, -delta_k * grid.z(i));
  OverlapMatrix out;
  out.delta_k = delta_k;
  out.U = b.transpose() * phase.asDiagonal() * a.conjugate() * grid.dz();
  return out;
}

ReadoutResult readout_modes(const GreenSet& g, const VectorXcd& phi) {
  if (g.kind != GreenKind::antistokes_beamsplitter)
    throw std::invalid_argument("readout_modes needs an anti-Stokes Green set");
  require_normalized(g.grid, phi);
  const double sdz = std::sqrt(g.grid.dz());
  const VectorXcd drive = phi.conjugate() * sdz;
  ReadoutResult r;
  r.sigma = (g.kab * drive).conjugate() / std::sqrt(g.grid.dt());
  r.epsilon = (g.kbb * drive).conjugate() / sdz;
  r.sigma_norm2 = weighted_norm2(r.sigma, g.grid.dt());
  r.residual = weighted_norm2(r.epsilon, g.grid.dz());
  return r;
}

ReadoutResult readout_direct(const SimulationGrid& grid, const PumpConfig& pump,
                             const VectorXcd& phi) {
  require_normalized(grid, phi);
  const FieldState out =
      evolve_antistokes(grid, pump, {VectorXcd::Zero(grid.nt()), phi.conjugate()});
  ReadoutResult r;
  r.sigma = out.alpha.conjugate();
  r.epsilon = out.beta.conjugate();
  r.sigma_norm2 = weighted_norm2(r.sigma, grid.dt());
  r.residual = weighted_norm2(r.epsilon, grid.dz());
  return r;
}

double crosstalk_check(const GreenSet& g, const VectorXcd& phi_target,
                       const std::vector<VectorXcd>& phi_others) {
  const ReadoutResult target = readout_modes(g, phi_target);
  double worst = 0.0;
  for (const auto& phi : phi_others) {
    const ReadoutResult other = readout_modes(g, phi);
    worst = std::max(worst, std::abs(weighted_inner(target.sigma, other.sigma, g.grid.dt())));
  }
  return worst;
}

ChainResult full_chain(const ChainConfig& cfg) {
  const SimulationGrid sgrid =
      make_grid(cfg.length, cfg.stokes.tau_p, cfg.stokes.delta_beta, cfg.nz, cfg.nt, cfg.margin);
  const SimulationGrid rgrid =
      make_grid(cfg.length, cfg.readout.tau_p, cfg.readout.delta_beta, cfg.nz, cfg.nt, cfg.margin);

  const GreenSet stokes = build_green(sgrid, cfg.stokes, Pass::stokes, cfg.jobs);
  DecompositionOptions opt;
  opt.truncate = false;
  const SqueezerDecomposition bm = bloch_messiah(stokes, opt);
  if (cfg.target_mode < 1 || cfg.target_mode > static_cast<int>(bm.modes.size()))
    throw std::invalid_argument(fmt::format("target mode {} outside 1..{}", cfg.target_mode,
                                            bm.modes.size()));
  const ModePair& target = bm.modes[static_cast<std::size_t>(cfg.target_mode - 1)];

  VectorXcd phi = target.phi_out;
  for (Eigen::Index i = 0; i < phi.size(); ++i) phi(i) *= std::polar(1.0, -cfg.delta_k * sgrid.z(i));

  const GreenSet readout = build_green(rgrid, cfg.readout, Pass::antistokes, cfg.jobs);
  ReadoutResult rr = readout_modes(readout, phi);
  rr.target_mode_index = cfg.target_mode;

  return ChainResult{
      .readout = std::move(rr),
      .stokes_grid = sgrid,
      .readout_grid = rgrid,
      .stokes_params = dimensionless(cfg.stokes, cfg.length),
      .readout_params = dimensionless(cfg.readout, cfg.length),
      .total_photons = bm.total_photons,
      .target_zeta = target.zeta,
      .stokes_structure = verify_structure(stokes),
      .stokes_decomposition = bm.residuals,
      .readout_structure = verify_structure(readout),
  };
}

std::vector<double> readout_sweep(const SimulationGrid& grid, const PumpConfig& pump,
                                  const VectorXcd& phi, const std::vector<double>& g0_values,
                                  unsigned jobs) {
  require_normalized(grid, phi);
  std::vector<double> out(g0_values.size());
  parallel_chunks(static_cast<long>(g0_values.size()), jobs, [&](long first, long last) {
    for (long k = first; k < last; ++k) {
      PumpConfig p = pump;
      p.g0 = g0_values[static_cast<std::size_t>(k)];
      out[static_cast<std::size_t>(k)] = readout_direct(grid, p, phi).residual;
    }
  });
  return out;
}

namespace {

// Vertex of the parabola through (a, fa), (b, fb), (c, fc).
double parabola_vertex(double a, double fa, double b, double fb, double c, double fc) {
  const double p = (b - a) * (fb - fc);
  const double q = (b - c) * (fb - fa);
  const double den = p - q;
  if (den == 0.0) return b;
  return b - 0.5 * ((b - a) * p - (b - c) * q) / den;
}

Minimum refine(double a, double fa, double b, double fb, double c, double fc,
               const std::function<double(double)>& f) {
  constexpr double golden = 0.3819660112501051;
  for (int iter = 0; iter < 60 && c - a > 1e-12 * (std::abs(b) + 1e-12); ++iter) {
    double x = parabola_vertex(a, fa, b, fb, c, fc);
    const double tiny = 1e-3 * (c - a);
    if (!(x > a + tiny && x < c - tiny) || std::abs(x - b) < tiny)
      x = (b - a > c - b) ? b - golden * (b - a) : b + golden * (c - b);
    const double fx = f(x);
    if (fx < fb) {
      if (x < b) {
        c = b, fc = fb;
      } else {
        a = b, fa = fb;
      }
      b = x, fb = fx;
    } else if (x < b) {
      a = x, fa = fx;
    } else {
      c = x, fc = fx;
    }
  }
  return {b, fb};
}

}  // namespace

std::vector<Minimum> locate_minima(const std::vector<double>& xs, const std::vector<double>& ys,
                                   const std::function<double(double)>& f) {
  if (xs.size() != ys.size()) throw std::invalid_argument("locate_minima: size mismatch");
  std::vector<Minimum> out;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (!(ys[i] < ys[i - 1] && ys[i] <= ys[i + 1])) continue;
    if (f) {
      out.push_back(refine(xs[i - 1], ys[i - 1], xs[i], ys[i], xs[i + 1], ys[i + 1], f));
    } else {
      const double x = parabola_vertex(xs[i - 1], ys[i - 1], xs[i], ys[i], xs[i + 1], ys[i + 1]);
      // Value of the interpolating parabola at its vertex.
      const double a = xs[i - 1], b = xs[i], c = xs[i + 1];
      const double y = ys[i - 1] * (x - b) * (x - c) / ((a - b) * (a - c)) +
                       ys[i] * (x - a) * (x - c) / ((b - a) * (b - c)) +
                       ys[i + 1] * (x - a) * (x - b) / ((c - a) * (c - b));
      out.push_back({x, y});
    }
  }
  return out;
}

int count_nodes(const VectorXcd& f) {
  if (f.size() == 0) return 0;
  const VectorXcd g = f * canonical_phase(f);
  const double threshold = 1e-3 * g.cwiseAbs().maxCoeff();
  int nodes = 0;
  int last_sign = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (std::abs(g(i)) <= threshold) continue;
    const int sign = g(i).real() > 0.0 ? 1 : (g(i).real() < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

}  // namespace raman
