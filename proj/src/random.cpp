#include "affsteer/random.hpp"

#include <array>

namespace affsteer {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
std::mt19937_64 make_engine(std::uint64_t seed) {
  std::array<std::uint32_t, 8> words{};
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < words.size(); i += 2) {
    const std::uint64_t z = splitmix64(state);
    words[i] = static_cast<std::uint32_t>(z);
    words[i + 1] = static_cast<std::uint32_t>(z >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}
}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(make_engine(seed)) {}

double Rng::normal() { return normal_(engine_); }

double Rng::uniform() { return uniform_(engine_); }

bool Rng::bernoulli(double p) { return uniform() < p; }

}  // namespace affsteer

namespace affsteer {

Matrix random_symmetric(Rng& rng, std::size_t d) {
  Matrix a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) a(i, j) = a(j, i) = rng.normal();
  return a;
}

Matrix random_psd(Rng& rng, std::size_t d, std::size_t cols, double ridge) {
  Matrix g(d, cols);
  for (double& v : g.data()) v = rng.normal();
  Matrix a = symmetrize((1.0 / static_cast<double>(cols)) * (g * transpose(g)));
  for (std::size_t i = 0; i < d; ++i) a(i, i) += ridge;
  return a;
}

Vector random_vector(Rng& rng, std::size_t d, double scale) {
  Vector v(d);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

}  // namespace affsteer
