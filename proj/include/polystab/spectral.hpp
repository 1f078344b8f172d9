#pragma once

#include <complex>
#include <vector>

#include "polystab/matrix.hpp"

namespace polystab {

// Default certification margin for the strict stability inequalities.
inline constexpr double kDefaultStabilityMargin = 1e-9;

// Full eigenvalue multiset of a real matrix, sorted by (real, imag).
struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;

    double radius() const;   // max modulus
    double abscissa() const; // max real part
    double min_real_part() const;
};

// Dense eigensolver (real Schur based). Throws std::invalid_argument on
// non-square or non-finite input, EigenSolverError if the iteration does
// not converge.
Spectrum eigenvalues(const Matrix& m);

double spectral_radius(const Matrix& m);
double spectral_abscissa(const Matrix& m);

// The decision problems are about open conditions (rho < 1, abscissa < 0),
// so a strict comparison at working precision is reported three ways: the
// condition holds by more than the margin, fails by more than the margin,
// or sits inside the margin band.
enum class StabilityVerdict { Stable, Unstable, Boundary };

struct StabilityResult {
    StabilityVerdict verdict = StabilityVerdict::Boundary;
    double gap = 0.0; // 1 - rho for Schur, -abscissa for Hurwitz; positive = stable side

    bool stable() const { return verdict == StabilityVerdict::Stable; }
};

StabilityResult is_schur(const Matrix& m, double margin = kDefaultStabilityMargin);
StabilityResult is_hurwitz(const Matrix& m, double margin = kDefaultStabilityMargin);

// Nonpositive off-diagonal entries, compared exactly (inputs here are
// constructed, not measured).
bool is_z_matrix(const Matrix& m);

// Three of the classical equivalent characterizations of a nonsingular
// M-matrix (a Z-matrix that is positive stable):
//   PositiveStable - every eigenvalue has real part > tol
//   D16            - every real eigenvalue is > tol
//   N38            - the inverse exists and is entrywise >= -tol
enum class MMatrixVariant { PositiveStable, D16, N38 };

enum class MMatrixVerdict { Yes, No, Singular };

struct MMatrixResult {
    MMatrixVerdict verdict = MMatrixVerdict::No;
    // Signed distance from the variant's decision boundary: min real part
    // (PositiveStable), smallest real eigenvalue (D16), smallest inverse
    // entry (N38). Zero when the matrix is not Z or is singular.
    double margin = 0.0;

    bool yes() const { return verdict == MMatrixVerdict::Yes; }
};

MMatrixResult is_nonsingular_m_matrix(const Matrix& m, MMatrixVariant variant,
                                      double tol = kDefaultStabilityMargin);

// Gauss-Jordan with partial pivoting; a pivot below 1e-12 throws
// SingularMatrixError. residual = max entry of |m * inverse - I|.
struct InverseResult {
    Matrix inverse;
    double residual = 0.0;
};

InverseResult matrix_inverse(const Matrix& m);

} // namespace polystab
