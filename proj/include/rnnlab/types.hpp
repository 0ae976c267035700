#pragma once

#include <Eigen/Core>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace rnnlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using VecI = Eigen::VectorXi;
using MatI = Eigen::MatrixXi;

// Deterministic RNG used throughout. Uniform doubles are built from the raw
// 64-bit stream so draws do not depend on the standard library's
// implementation-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

  // Derives an independent stream from a base seed and up to three tags.
  static Rng stream(std::uint64_t seed, std::uint64_t a = 0,
                    std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix(seed);
    s = mix(s ^ (0x9e3779b97f4a7c15ull + a));
    s = mix(s ^ (0xbf58476d1ce4e5b9ull + b));
    s = mix(s ^ (0x94d049bb133111ebull + c));
    return Rng(s);
  }

  std::uint64_t raw() { return gen_(); }

  // Strictly inside (0, 1).
  double uniform() {
    return (static_cast<double>(raw() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Strictly inside (-1, 1).
  double uniform_pm1() { return 2.0 * uniform() - 1.0; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, n).
  std::size_t index(std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = raw();
    while (x >= limit) x = raw();
    return static_cast<std::size_t>(x % n);
  }

  bool coin() { return (raw() & 1ull) != 0; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. Items must be
// independent; results written to preallocated slots stay deterministic
// regardless of thread count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int k = std::min<std::size_t>(threads, n);
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace rnnlab
