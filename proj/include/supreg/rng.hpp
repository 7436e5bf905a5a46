#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace supreg {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream tags used when deriving substream seeds from a master seed.
/// Distinct tags keep the design, noise, replicate and calibration
/// streams of the same (n, replicate) pair pairwise distinct.
enum class Stream : std::uint64_t {
    design = 1,
    noise = 2,
    replicate = 3,
    calibration = 4,
    membership = 5,
    figure = 6,
};

/// Deterministic seed split: master -> substream seed for (tag, a, b).
inline std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t x = splitmix64(master ^ 0x6a09e667f3bcc908ULL);
    x = splitmix64(x ^ static_cast<std::uint64_t>(tag));
    x = splitmix64(x ^ a);
    x = splitmix64(x ^ b);
    return x;
}

/// Seeded generator with fully specified output. Uniform draws use the
/// top 53 bits of mt19937_64; normal draws use Box-Muller with a fixed
/// consumption of two uniforms per call, so streams are reproducible
/// bit-for-bit for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal (Box-Muller, second value discarded).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

} // namespace supreg
