#include "warpcheck/random.hpp"

namespace warpcheck {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

Vec random_gaussian(Rng& rng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

double random_uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t random_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Vec random_in_box(Rng& rng, const Vec& lo, const Vec& hi) {
  Vec p(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) p[i] = random_uniform(rng, lo[i], hi[i]);
  return p;
}

Mat random_orthogonal(Rng& rng, std::size_t n) {
  for (;;) {
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < n; ++j) cols.push_back(random_gaussian(rng, n));
    try {
      return Mat::from_columns(gram_schmidt(cols, euclidean_inner(), 1e-6));
    } catch (const Error&) {
      // astronomically unlikely; draw again
    }
  }
}

Mat random_symmetric(Rng& rng, std::size_t n, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = dist(rng);
  return m;
}

}  // namespace warpcheck
