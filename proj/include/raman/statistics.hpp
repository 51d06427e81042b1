#pragma once

#include <vector>

#include "raman/decomposition.hpp"

namespace raman {

std::vector<double> occupancies(const std::vector<ModePair>& pairs);

// Mean photon number, sum of occupancies.
double total_photons(const std::vector<double>& occ);
double total_photons(const std::vector<ModePair>& pairs);

// Equivalent number of equal thermal modes, N^2 / sum n^2.
// Throws UndefinedStatistic when every occupancy is zero.
double equivalent_modes(const std::vector<double>& occ);
double equivalent_modes(const std::vector<ModePair>& pairs);

enum class PmfPath { automatic, exact, transform };

struct PmfOptions {
  long n_max = 0;       // 0: mean plus ten standard deviations
  long resolution = 0;  // maximum number of returned samples, 0: all
  PmfPath path = PmfPath::automatic;
};

// Photon-count distribution sampled at n = 0, stride, 2 stride, ... <= n_max.
struct PhotonPmf {
  PmfPath path = PmfPath::exact;
  long n_max = 0;
  long stride = 1;
  std::vector<long> n;
  std::vector<double> p;
  double mass = 0.0;            // probability on [0, n_max]
  double truncated_mass = 0.0;  // 1 - mass
  double mean = 0.0;            // sum n p(n) on [0, n_max]
  int modes_used = 0;
  bool continuous_limit = false;  // transform path past kTransformBudget
};

// Above this mean the automatic choice is the transform path.
inline constexpr double kExactPathLimit = 1e4;
// Largest k-grid the transform path inverts. Beyond it the continuous-limit
// density (sum of exponential variables) is evaluated directly on the
// output samples instead.
inline constexpr long kTransformBudget = 1L << 26;

// Multimode thermal law. The exact path convolves per-mode geometric laws;
// the transform path inverts the characteristic function
// prod 1 / (1 - n_k (e^{ik} - 1)) on a k-grid.
PhotonPmf photon_pmf(const std::vector<double>& occ, const PmfOptions& opt = {});

struct PhotonStats {
  std::vector<double> occupancies;
  double total = 0.0;
  double equivalent_modes = 0.0;  // 0 when undefined (no photons)
};

PhotonStats photon_stats(const std::vector<ModePair>& pairs);

}  // namespace raman
