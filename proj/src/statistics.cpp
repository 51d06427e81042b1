#include "raman/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

#include "raman/errors.hpp"

namespace raman {

std::vector<double> occupancies(const std::vector<ModePair>& pairs) {
  std::vector<double> occ;
  occ.reserve(pairs.size());
  for (const auto& p : pairs) occ.push_back(p.occupancy());
  return occ;
}

double total_photons(const std::vector<double>& occ) {
  double n = 0.0;
  for (double x : occ) n += x;
  return n;
}

double total_photons(const std::vector<ModePair>& pairs) { return total_photons(occupancies(pairs)); }

double equivalent_modes(const std::vector<double>& occ) {
  double n = 0.0, n2 = 0.0;
  for (double x : occ) {
    n += x;
    n2 += x * x;
  }
  if (!(n2 > 0.0)) throw UndefinedStatistic("equivalent mode number needs a nonzero occupancy");
  return n * n / n2;
}

double equivalent_modes(const std::vector<ModePair>& pairs) {
  return equivalent_modes(occupancies(pairs));
}

namespace {

// Smallest 2^a 3^b 5^c >= n, so the FFT stays O(n log n).
long next_smooth(long n) {
  for (long k = std::max(1L, n);; ++k) {
    long r = k;
    for (long f : {2L, 3L, 5L})
      while (r % f == 0) r /= f;
    if (r == 1) return k;
  }
}

void exact_pmf(const std::vector<double>& occ, long stride, PhotonPmf& out) {
  std::vector<double> p(static_cast<std::size_t>(out.n_max) + 1, 0.0);
  p[0] = 1.0;
  for (double nbar : occ) {
    // Convolution with the geometric law (1 - q) q^n, done in place.
    const double q = nbar / (1.0 + nbar);
    p[0] *= 1.0 - q;
    for (std::size_t n = 1; n < p.size(); ++n) p[n] = (1.0 - q) * p[n] + q * p[n - 1];
  }
  for (std::size_t n = 0; n < p.size(); ++n) {
    out.mass += p[n];
    out.mean += static_cast<double>(n) * p[n];
  }
  for (long n = 0; n <= out.n_max; n += stride) {
    out.n.push_back(n);
    out.p.push_back(p[static_cast<std::size_t>(n)]);
  }
}

void transform_pmf(const std::vector<double>& occ, long target_samples, PhotonPmf& out) {
  const long support = out.n_max + 1;
  const long h = (support + target_samples - 1) / target_samples;
  // The inversion is periodic in n with period nf; a period of twice the
  // support keeps the wrapped tail far below the small-n values.
  const long k_bins = next_smooth((2 * support + h - 1) / h);
  const long nf = k_bins * h;

  // Samples at n = r h only need the characteristic function folded mod k_bins.
  std::vector<cd> folded(static_cast<std::size_t>(k_bins), cd(0.0));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(nf);
  for (long l = 0; l < nf; ++l) {
    const double k = step * static_cast<double>(l);
    const double c1 = std::cos(k) - 1.0;
    const double s = std::sin(k);
    cd den(1.0, 0.0);
    bool negligible = false;
    for (double nbar : occ) {
      den *= cd(1.0 - nbar * c1, -nbar * s);
      if (std::norm(den) > 1e300) {
        negligible = true;
        break;
      }
    }
    if (!negligible) folded[static_cast<std::size_t>(l % k_bins)] += 1.0 / den;
  }

  Eigen::FFT<double> fft;
  std::vector<cd> spectrum;
  fft.fwd(spectrum, folded);

  out.stride = h;
  for (long r = 0; r * h <= out.n_max; ++r) {
    const double p = spectrum[static_cast<std::size_t>(r)].real() / static_cast<double>(nf);
    if (!std::isfinite(p))
      throw NumericalFailure(fmt::format("non-finite pmf sample at n = {} (k-grid {} points, {} bins)",
                                         r * h, nf, k_bins));
    out.n.push_back(r * h);
    out.p.push_back(p);
    out.mass += p * static_cast<double>(h);
    out.mean += static_cast<double>(r * h) * p * static_cast<double>(h);
  }
  if (std::abs(out.mass - 1.0) > 0.5)
    throw NumericalFailure(fmt::format(
        "characteristic-function inversion lost normalization: mass {} on [0, {}] with {} bins",
        out.mass, out.n_max, k_bins));
}

// Continuous limit: density of a sum of exponential variables with means
// occ, sampled at n = r h. Each convolution with e^{-x/m}/m is integrated
// exactly for a density that is linear between samples.
void continuous_pmf(std::vector<double> occ, long h, PhotonPmf& out) {
  std::sort(occ.rbegin(), occ.rend());
  const long samples = out.n_max / h + 1;
  const double dx = static_cast<double>(h);
  std::vector<double> f(static_cast<std::size_t>(samples));
  for (long r = 0; r < samples; ++r)
    f[static_cast<std::size_t>(r)] = std::exp(-static_cast<double>(r) * dx / occ[0]) / occ[0];
  std::vector<double> g(f.size());
  for (std::size_t k = 1; k < occ.size(); ++k) {
    const double u = dx / occ[k];
    const double one_minus_a = -std::expm1(-u);
    const double a = 1.0 - one_minus_a;
    const double w1 = 1.0 - one_minus_a / u;
    const double w0 = one_minus_a - w1;
    g[0] = 0.0;
    for (std::size_t r = 0; r + 1 < f.size(); ++r) g[r + 1] = a * g[r] + w0 * f[r] + w1 * f[r + 1];
    f.swap(g);
  }
  out.stride = h;
  for (long r = 0; r < samples; ++r) {
    const double p = f[static_cast<std::size_t>(r)];
    const double w = (r == 0 || r == samples - 1) ? 0.5 * dx : dx;
    out.n.push_back(r * h);
    out.p.push_back(p);
    out.mass += p * w;
    out.mean += static_cast<double>(r * h) * p * w;
  }
}

}  // namespace

PhotonPmf photon_pmf(const std::vector<double>& occ_in, const PmfOptions& opt) {
  double total = 0.0, var = 0.0;
  for (double x : occ_in) {
    if (!(x >= 0.0)) throw std::invalid_argument(fmt::format("negative occupancy {}", x));
    total += x;
    var += x * (x + 1.0);
  }
  if (opt.n_max < 0 || opt.resolution < 0)
    throw std::invalid_argument("n_max and resolution must be non-negative");

  PhotonPmf out;
  out.n_max = opt.n_max > 0 ? opt.n_max
                            : std::max(1L, static_cast<long>(std::ceil(total + 10.0 * std::sqrt(var))));
  std::vector<double> occ;
  for (double x : occ_in)
    if (x > 0.0 && x >= 1e-6 * total) occ.push_back(x);
  out.modes_used = static_cast<int>(occ.size());

  out.path = opt.path;
  if (out.path == PmfPath::automatic)
    out.path = total < kExactPathLimit ? PmfPath::exact : PmfPath::transform;

  const long support = out.n_max + 1;
  const long samples = opt.resolution > 0 ? std::min(opt.resolution, support) : support;
  if (out.path == PmfPath::exact) {
    out.stride = (support + samples - 1) / samples;
    exact_pmf(occ, out.stride, out);
  } else {
    const long h = (support + samples - 1) / samples;
    out.continuous_limit = 2 * support > kTransformBudget && !occ.empty();
    if (out.continuous_limit)
      continuous_pmf(occ, h, out);
    else
      transform_pmf(occ, samples, out);
  }
  out.truncated_mass = std::max(0.0, 1.0 - out.mass);
  return out;
}

PhotonStats photon_stats(const std::vector<ModePair>& pairs) {
  PhotonStats s;
  s.occupancies = occupancies(pairs);
  s.total = total_photons(s.occupancies);
  s.equivalent_modes = s.total > 0.0 ? equivalent_modes(s.occupancies) : 0.0;
  return s;
}

}  // namespace raman
