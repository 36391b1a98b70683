#pragma once

#include <cstdint>
#include <random>

#include "poro/vec.hpp"

namespace poro {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seeded generator. Substreams are derived from (seed, index)
// so parallel work over an index space reproduces bit-identically regardless
// of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : root_(seed) {
        std::uint64_t s = seed;
        eng_.seed(splitmix64(s));
    }

    Rng substream(std::uint64_t index) const {
        std::uint64_t s = root_ ^ (0x51b4d09835bf3d47ULL * (index + 1));
        return Rng(splitmix64(s));
    }

    std::uint64_t next_u64() { return eng_(); }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
    }

    double normal() {
        return std::normal_distribution<double>(0.0, 1.0)(eng_);
    }

    Vec normal_vec(std::size_t n) {
        Vec v(n);
        for (auto& x : v) x = normal();
        return v;
    }

    // Uniform on the unit sphere S^{n-1}.
    Vec unit_vec(std::size_t n) {
        for (int tries = 0; tries < 64; ++tries) {
            Vec v = normal_vec(n);
            const double m = norm(v);
            if (m > 1e-12) {
                for (auto& x : v) x /= m;
                return v;
            }
        }
        Vec v(n, 0.0);
        v[0] = 1.0;
        return v;
    }

    // Uniform in the unit ball.
    Vec in_unit_ball(std::size_t n) {
        Vec v = unit_vec(n);
        const double r = std::pow(uniform(), 1.0 / static_cast<double>(n));
        for (auto& x : v) x *= r;
        return v;
    }

private:
    std::uint64_t root_;
    std::mt19937_64 eng_;
};

} // namespace poro
