#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "raman/errors.hpp"
#include "raman/statistics.hpp"

using namespace raman;

namespace {

PhotonPmf pmf(const std::vector<double>& occ, long n_max, PmfPath path = PmfPath::exact) {
  PmfOptions opt;
  opt.n_max = n_max;
  opt.path = path;
  return photon_pmf(occ, opt);
}

ModePair pair_with(double zeta) {
  ModePair m;
  m.zeta = zeta;
  return m;
}

// Occupancies falling geometrically, scaled to a given total.
std::vector<double> spectrum(double total, int count, double ratio) {
  std::vector<double> occ(count);
  for (int k = 0; k < count; ++k) occ[k] = std::pow(ratio, k);
  const double s = std::accumulate(occ.begin(), occ.end(), 0.0);
  for (double& x : occ) x *= total / s;
  return occ;
}

}  // namespace

TEST_CASE("total photon number is the sum of occupancies") {
  CHECK(total_photons(std::vector<double>{}) == 0.0);
  CHECK(total_photons(std::vector<ModePair>{}) == 0.0);
  CHECK(total_photons(std::vector<double>{3.0}) == 3.0);
  CHECK(total_photons({pair_with(std::asinh(std::sqrt(3.0)))}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(occupancies({pair_with(0.5), pair_with(0.1)}) ==
        std::vector<double>{std::pow(std::sinh(0.5), 2), std::pow(std::sinh(0.1), 2)});
}

TEST_CASE("equivalent mode number") {
  CHECK(equivalent_modes(std::vector<double>{4.0}) == 1.0);
  CHECK(equivalent_modes(std::vector<double>{4.0, 0.0}) == 1.0);
  CHECK(equivalent_modes(std::vector<double>{2.5, 2.5}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(equivalent_modes(std::vector<double>{0.0, 0.0}), UndefinedStatistic);
  CHECK_THROWS_AS(equivalent_modes(std::vector<double>{}), UndefinedStatistic);
  CHECK(photon_stats({pair_with(0.0)}).equivalent_modes == 0.0);

  // 1 <= M <= number of nonzero occupancies, on random spectra.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> occ(1 + trial % 9);
    for (double& x : occ) x = u(rng);
    const double m = equivalent_modes(occ);
    CHECK(m >= 1.0 - 1e-12);
    CHECK(m <= static_cast<double>(occ.size()) + 1e-12);
  }
}

TEST_CASE("single mode follows the geometric law") {
  for (double nbar : {0.01, 0.7, 3.0, 40.0}) {
    CAPTURE(nbar);
    const auto r = pmf({nbar}, 400);
    const auto want = oracle::geometric(nbar, 401);
    REQUIRE(r.p.size() == 401);
    CHECK(r.p[0] == doctest::Approx(1.0 / (1.0 + nbar)).epsilon(1e-15));
    for (std::size_t n = 0; n < want.size(); ++n) CHECK(std::abs(r.p[n] - want[n]) < 1e-12);
  }
}

TEST_CASE("two equal modes match the convolution oracle and closed form") {
  const double nbar = 2.5;
  const auto r = pmf({nbar, nbar}, 200);
  const auto g = oracle::geometric(nbar, 201);
  const auto conv = oracle::convolve(g, g);
  for (std::size_t n = 0; n < conv.size(); ++n) {
    CHECK(std::abs(r.p[n] - conv[n]) < 1e-12);
    const double closed = (n + 1.0) * std::pow(nbar / (1.0 + nbar), n) / std::pow(1.0 + nbar, 2.0);
    CHECK(std::abs(r.p[n] - closed) < 1e-12);
  }
}

TEST_CASE("unequal modes match repeated convolution") {
  const std::vector<double> occ{5.0, 1.2, 0.3, 0.05};
  const auto r = pmf(occ, 150);
  std::vector<double> want = oracle::geometric(occ[0], 151);
  for (std::size_t k = 1; k < occ.size(); ++k) want = oracle::convolve(want, oracle::geometric(occ[k], 151));
  for (std::size_t n = 0; n < want.size(); ++n) CHECK(std::abs(r.p[n] - want[n]) < 1e-12);
}

TEST_CASE("exact and transform paths agree where both run") {
  for (double total : {1e2, 1e3, 1e4}) {
    CAPTURE(total);
    const auto occ = spectrum(total, 12, 0.6);
    const auto e = pmf(occ, 0, PmfPath::exact);
    const auto t = pmf(occ, 0, PmfPath::transform);
    REQUIRE(e.n == t.n);
    const double peak = *std::max_element(e.p.begin(), e.p.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < e.p.size(); ++i)
      if (e.p[i] > 1e-6 * peak) worst = std::max(worst, std::abs(t.p[i] - e.p[i]) / e.p[i]);
    CHECK(worst < 1e-2);
  }
}

TEST_CASE("automatic path and support sizing") {
  const auto small = photon_pmf(spectrum(500, 5, 0.5));
  CHECK(small.path == PmfPath::exact);
  const auto big = photon_pmf(spectrum(1e6, 20, 0.8), {0, 2000, PmfPath::automatic});
  CHECK(big.path == PmfPath::transform);
  CHECK(big.p.size() <= 2000);
  CHECK(big.stride > 1);

  for (double total : {1e2, 1e4, 1e6}) {
    const auto occ = spectrum(total, 8, 0.4);
    double var = 0.0;
    for (double x : occ) var += x * (x + 1.0);
    const auto r = photon_pmf(occ, {0, 4000, PmfPath::automatic});
    CHECK(r.n_max == static_cast<long>(std::ceil(total + 10.0 * std::sqrt(var))));
    CHECK(r.mass >= 0.999);
    CHECK(r.mass <= 1.0 + 1e-9);
    CHECK(r.truncated_mass == doctest::Approx(1.0 - r.mass));
    CHECK(std::abs(r.mean - total) <= 5e-3 * total);
    for (double p : r.p) CHECK(p >= 0.0);
  }
}

TEST_CASE("tiny occupancies are dropped") {
  const auto r = photon_pmf({100.0, 1e-5, 50.0});
  CHECK(r.modes_used == 2);
}

TEST_CASE("pmf shape: single dominant mode is monotone, many equal modes peak away from zero") {
  // Weaker modes only shape the first ~n_2 counts, below one sample stride.
  const auto thermal = photon_pmf(spectrum(1e6, 10, 1e-3), {0, 1000, PmfPath::automatic});
  for (std::size_t i = 2; i < thermal.p.size(); ++i) CHECK(thermal.p[i] <= thermal.p[i - 1] * (1 + 1e-9));
  const auto multi = photon_pmf(std::vector<double>(10, 1e5), {0, 1000, PmfPath::automatic});
  const auto peak = std::max_element(multi.p.begin(), multi.p.end()) - multi.p.begin();
  CHECK(multi.n[peak] > 5e5);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(photon_pmf({1.0, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(photon_pmf({1.0}, {-1, 0, PmfPath::exact}), std::invalid_argument);
  const auto empty = photon_pmf({});
  CHECK(empty.p.front() == 1.0);
}

TEST_CASE("continuous limit at very large means") {
  const double nbar = 1e9;
  const auto r = photon_pmf({nbar}, {0, 1000, PmfPath::transform});
  CHECK(r.continuous_limit);
  const double q = nbar / (1.0 + nbar);
  for (std::size_t i = 1; i < r.p.size(); ++i) {
    const double want = std::pow(q, static_cast<double>(r.n[i])) / (1.0 + nbar);
    if (want > 1e-6 / nbar) CHECK(std::abs(r.p[i] - want) <= 1e-2 * want);
  }
  CHECK(std::abs(r.mean - nbar) <= 1e-2 * nbar);

  const auto two = photon_pmf({6e8, 4e8}, {0, 1000, PmfPath::transform});
  CHECK(two.continuous_limit);
  CHECK(std::abs(two.mean - 1e9) <= 5e-3 * 1e9);
  CHECK(std::abs(two.mass - 1.0) < 1e-2);
}
