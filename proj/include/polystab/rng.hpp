#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace polystab {

// Seeded random source. Wraps std::mt19937_64 but derives all variates
// from raw 64-bit draws so that streams are identical across standard
// library implementations (the std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53 bits of mantissa.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Standard normal via Box-Muller; second value of each pair is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    // Uniform point on the standard simplex (flat Dirichlet) via
    // exponential spacings.
    std::vector<double> dirichlet(int k) {
        std::vector<double> w(static_cast<std::size_t>(k));
        double sum = 0.0;
        for (auto& wi : w) {
            double u = uniform01();
            while (u <= 0.0) u = uniform01();
            wi = -std::log(u);
            sum += wi;
        }
        for (auto& wi : w) wi /= sum;
        return w;
    }

    // Uniformly distributed direction (normalized Gaussian vector).
    std::vector<double> unit_vector(int n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& vi : v) {
                vi = normal();
                norm2 += vi * vi;
            }
        } while (norm2 < 1e-24);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& vi : v) vi *= inv;
        return v;
    }

private:
    std::mt19937_64 gen_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

} // namespace polystab
