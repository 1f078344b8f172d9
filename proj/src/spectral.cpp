#include "polystab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "polystab/errors.hpp"

namespace polystab {

double Spectrum::radius() const {
    double r = 0.0;
    for (const auto& ev : eigenvalues) r = std::max(r, std::abs(ev));
    return r;
}

double Spectrum::abscissa() const {
    double a = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues) a = std::max(a, ev.real());
    return a;
}

double Spectrum::min_real_part() const {
    double a = std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues) a = std::min(a, ev.real());
    return a;
}

Spectrum eigenvalues(const Matrix& m) {
    if (!m.square() || m.rows() == 0)
        throw std::invalid_argument("eigenvalues: matrix must be square and non-empty");
    if (!m.all_finite()) throw std::invalid_argument("eigenvalues: non-finite entry");

    const int n = m.rows();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = m(i, j);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw EigenSolverError("eigenvalue iteration failed to converge");

    Spectrum s;
    s.eigenvalues.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s.eigenvalues.push_back(solver.eigenvalues()[i]);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return s;
}

double spectral_radius(const Matrix& m) { return eigenvalues(m).radius(); }

double spectral_abscissa(const Matrix& m) { return eigenvalues(m).abscissa(); }

namespace {

StabilityResult classify(double gap, double margin) {
    StabilityResult r;
    r.gap = gap;
    if (gap > margin)
        r.verdict = StabilityVerdict::Stable;
    else if (gap < -margin)
        r.verdict = StabilityVerdict::Unstable;
    else
        r.verdict = StabilityVerdict::Boundary;
    return r;
}

} // namespace

StabilityResult is_schur(const Matrix& m, double margin) {
    return classify(1.0 - spectral_radius(m), margin);
}

StabilityResult is_hurwitz(const Matrix& m, double margin) {
    return classify(-spectral_abscissa(m), margin);
}

bool is_z_matrix(const Matrix& m) {
    if (!m.square()) return false;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (i != j && m(i, j) > 0.0) return false;
    return true;
}

MMatrixResult is_nonsingular_m_matrix(const Matrix& m, MMatrixVariant variant, double tol) {
    MMatrixResult res;
    if (!is_z_matrix(m)) return res; // No, margin 0

    switch (variant) {
    case MMatrixVariant::PositiveStable: {
        res.margin = eigenvalues(m).min_real_part();
        res.verdict = res.margin > tol ? MMatrixVerdict::Yes : MMatrixVerdict::No;
        return res;
    }
    case MMatrixVariant::D16: {
        // "Real" at working precision: |Im| within 1e-9 of zero, scaled.
        const Spectrum s = eigenvalues(m);
        double smallest = std::numeric_limits<double>::infinity();
        for (const auto& ev : s.eigenvalues)
            if (std::abs(ev.imag()) <= 1e-9 * (1.0 + std::abs(ev)))
                smallest = std::min(smallest, ev.real());
        res.margin = smallest;
        res.verdict = smallest > tol ? MMatrixVerdict::Yes : MMatrixVerdict::No;
        return res;
    }
    case MMatrixVariant::N38: {
        InverseResult inv;
        try {
            inv = matrix_inverse(m);
        } catch (const SingularMatrixError&) {
            res.verdict = MMatrixVerdict::Singular;
            return res;
        }
        double smallest = std::numeric_limits<double>::infinity();
        for (double v : inv.inverse.data()) smallest = std::min(smallest, v);
        res.margin = smallest;
        res.verdict = smallest >= -tol ? MMatrixVerdict::Yes : MMatrixVerdict::No;
        return res;
    }
    }
    throw std::logic_error("unreachable M-matrix variant");
}

InverseResult matrix_inverse(const Matrix& m) {
    if (!m.square() || m.rows() == 0)
        throw std::invalid_argument("matrix_inverse: matrix must be square and non-empty");
    if (!m.all_finite()) throw std::invalid_argument("matrix_inverse: non-finite entry");

    const int n = m.rows();
    Matrix work = m;
    Matrix inv = Matrix::identity(n);

    for (int col = 0; col < n; ++col) {
        int pivot_row = col;
        double pivot = std::abs(work(col, col));
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(work(r, col)) > pivot) {
                pivot = std::abs(work(r, col));
                pivot_row = r;
            }
        }
        if (pivot < 1e-12)
            throw SingularMatrixError("pivot " + std::to_string(pivot) +
                                      " below threshold at column " + std::to_string(col));
        if (pivot_row != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(work(col, c), work(pivot_row, c));
                std::swap(inv(col, c), inv(pivot_row, c));
            }
        }
        const double scale = 1.0 / work(col, col);
        for (int c = 0; c < n; ++c) {
            work(col, c) *= scale;
            inv(col, c) *= scale;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = work(r, col);
            if (factor == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                work(r, c) -= factor * work(col, c);
                inv(r, c) -= factor * inv(col, c);
            }
        }
    }

    InverseResult out{std::move(inv), 0.0};
    out.residual = max_abs_diff(m * out.inverse, Matrix::identity(n));
    return out;
}

} // namespace polystab
