#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "affsteer/matrix.hpp"

namespace affsteer {

// Seeded generator: the 64-bit seed is expanded with splitmix64 into the
// seed sequence of a mt19937_64. Streams are reproducible for a given
// standard library, not across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double normal();
  double uniform();  // [0, 1)
  bool bernoulli(double p);
  std::uint64_t next() { return engine_(); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    // Fisher-Yates with our own index draws so the permutation does not
    // depend on std::shuffle's unspecified algorithm.
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(engine_() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace affsteer

namespace affsteer {

// Random test matrices.
// Symmetric with N(0,1) upper-triangle entries.
Matrix random_symmetric(Rng& rng, std::size_t d);
// G Gᵀ / cols + ridge * I with G a d x cols standard normal matrix; rank
// min(d, cols) when ridge == 0.
Matrix random_psd(Rng& rng, std::size_t d, std::size_t cols, double ridge = 0.0);
Vector random_vector(Rng& rng, std::size_t d, double scale = 1.0);

}  // namespace affsteer
