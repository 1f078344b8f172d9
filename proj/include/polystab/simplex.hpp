#pragma once

#include <cmath>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polystab {

// Sum of weights must match 1 to this tolerance at construction.
inline constexpr double kSimplexSumTol = 1e-12;

// A point on the standard simplex: nonnegative weights summing to one.
// These are the convex-combination coefficients applied to polytope
// vertices, so validity is enforced at construction and the weights are
// immutable afterwards.
class SimplexPoint {
public:
    explicit SimplexPoint(std::vector<double> weights) : w_(std::move(weights)) {
        if (w_.empty()) throw std::invalid_argument("SimplexPoint: empty weight vector");
        double sum = 0.0;
        for (double wi : w_) {
            if (!(wi >= 0.0)) // also rejects NaN
                throw std::invalid_argument("SimplexPoint: negative or non-finite weight");
            sum += wi;
        }
        if (std::abs(sum - 1.0) > kSimplexSumTol)
            throw std::invalid_argument("SimplexPoint: weights sum to " + std::to_string(sum) +
                                        ", not 1");
    }

    static SimplexPoint uniform(int k) {
        if (k <= 0) throw std::invalid_argument("SimplexPoint::uniform: k must be positive");
        return SimplexPoint(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
    }

    // The i-th vertex e_i of the simplex.
    static SimplexPoint vertex(int k, int i) {
        if (i < 0 || i >= k) throw std::invalid_argument("SimplexPoint::vertex: index out of range");
        std::vector<double> w(static_cast<std::size_t>(k), 0.0);
        w[static_cast<std::size_t>(i)] = 1.0;
        return SimplexPoint(std::move(w));
    }

    // Uniform weights restricted to a vertex subset (empty support rejected).
    static SimplexPoint uniform_on(int k, std::span<const int> support) {
        if (support.empty()) throw std::invalid_argument("SimplexPoint::uniform_on: empty support");
        std::vector<double> w(static_cast<std::size_t>(k), 0.0);
        for (int i : support) {
            if (i < 0 || i >= k)
                throw std::invalid_argument("SimplexPoint::uniform_on: index out of range");
            w[static_cast<std::size_t>(i)] = 1.0 / static_cast<double>(support.size());
        }
        return SimplexPoint(std::move(w));
    }

    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& weights() const { return w_; }

    auto begin() const { return w_.begin(); }
    auto end() const { return w_.end(); }

private:
    std::vector<double> w_;
};

// All rational simplex points with the given denominator: weights a_i/d
// with a_i nonnegative integers summing to d. Deterministic exhaustive
// falsification surface for the Motzkin-Straus checks at small dimension.
inline std::vector<SimplexPoint> simplex_grid(int dim, int denominator) {
    if (dim <= 0 || denominator <= 0)
        throw std::invalid_argument("simplex_grid: dim and denominator must be positive");
    std::vector<SimplexPoint> out;
    std::vector<int> counts(static_cast<std::size_t>(dim), 0);
    // Recursive composition enumeration, lexicographic.
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == dim - 1) {
            counts[static_cast<std::size_t>(pos)] = remaining;
            std::vector<double> w(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i)
                w[static_cast<std::size_t>(i)] =
                    static_cast<double>(counts[static_cast<std::size_t>(i)]) / denominator;
            out.emplace_back(std::move(w));
            return;
        }
        for (int a = 0; a <= remaining; ++a) {
            counts[static_cast<std::size_t>(pos)] = a;
            self(self, pos + 1, remaining - a);
        }
    };
    rec(rec, 0, denominator);
    return out;
}

} // namespace polystab
