#ifndef COPNET_UTIL_HPP
#define COPNET_UTIL_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace copnet {

/// Hard error raised by any stage on contract violation or bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

std::string strprintf(const char* fmt, ...);

/// Round to the given number of significant decimal digits.
/// Used to stabilize serialized numbers across platforms.
double round_sig(double x, int digits = 6);

/// splitmix64 finalizer; used to derive independent child seeds.
uint64_t mix64(uint64_t x);

inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

/// Deterministic random stream. Backed by mt19937_64, which is fully
/// specified by the standard, so sequences are stable across platforms.
/// Bounded draws use 128-bit multiply-shift instead of
/// std::uniform_int_distribution (whose mapping is implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  uint64_t bounded(uint64_t n) {
    // n == 0 is a caller bug
    if (n == 0) fail("Rng::bounded: n must be positive");
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Run fn(chunk_index) for chunk_index in [0, n_chunks), using up to
/// `workers` threads. Callers collect per-chunk results by index, so the
/// aggregate is independent of the thread count.
void parallel_chunks(std::size_t n_chunks, int workers,
                     const std::function<void(std::size_t)>& fn);

}  // namespace copnet

#endif
