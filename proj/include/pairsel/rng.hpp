#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pairsel {

// Generator identity recorded in simulation reports. Substreams are derived
// by hashing (seed, stream indices) with splitmix64; normals come from
// Box-Muller on 53-bit uniforms, so draws are reproducible bit-for-bit.
inline constexpr const char* kGeneratorId =
    "mt19937_64/splitmix64-substreams/box-muller";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // Independent stream for (seed, a, b), e.g. (scenario seed, replication, role).
    static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        return Rng(splitmix64(splitmix64(seed) ^ splitmix64(a * 0x9e3779b97f4a7c15ULL + 1)) ^
                   splitmix64(b + 0x2545f4914f6cdd1dULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0,1), never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // Chi-squared with integer degrees of freedom (sum of squared normals).
    double chi_squared(int df) {
        double s = 0.0;
        for (int i = 0; i < df; ++i) {
            const double z = normal();
            s += z * z;
        }
        return s;
    }

    bool bernoulli(double prob) { return uniform() < prob; }

    // Fisher-Yates shuffle of [0, n), used for fold assignment.
    template <typename Container>
    void shuffle(Container& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = engine_() % i;
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pairsel
