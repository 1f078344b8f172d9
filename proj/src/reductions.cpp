#include "polystab/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polystab {

void MatrixPolytope::validate() const {
    if (matrices.empty()) throw std::invalid_argument("MatrixPolytope: needs at least one matrix");
    const int n = matrices.front().rows();
    for (const Matrix& m : matrices) {
        if (!m.square() || m.rows() != n)
            throw std::invalid_argument("MatrixPolytope: matrices must be square of equal size");
        if (!m.all_finite())
            throw std::invalid_argument("MatrixPolytope: non-finite entry");
    }
}

Matrix convex_combination(const MatrixPolytope& p, const SimplexPoint& pi) {
    p.validate();
    if (pi.size() != p.k())
        throw std::invalid_argument("convex_combination: weight length " +
                                    std::to_string(pi.size()) + " does not match k = " +
                                    std::to_string(p.k()));
    Matrix b(p.dim(), p.dim());
    for (int i = 0; i < p.k(); ++i) b.add_scaled(p.matrices[static_cast<std::size_t>(i)], pi[i]);
    return b;
}

std::string to_string(ReductionKind kind) {
    switch (kind) {
    case ReductionKind::MinRadius: return "min-radius";
    case ReductionKind::MaxRadius: return "max-radius";
    case ReductionKind::MMatrix: return "m-matrix";
    case ReductionKind::Hurwitz: return "hurwitz";
    }
    throw std::logic_error("unreachable reduction kind");
}

ReductionKind reduction_kind_from_string(const std::string& s) {
    if (s == "min-radius") return ReductionKind::MinRadius;
    if (s == "max-radius") return ReductionKind::MaxRadius;
    if (s == "m-matrix") return ReductionKind::MMatrix;
    if (s == "hurwitz") return ReductionKind::Hurwitz;
    throw std::invalid_argument("unknown reduction kind '" + s + "'");
}

double min_radius_r(int j) { return static_cast<double>(j - 2) / static_cast<double>(j - 1); }

double max_radius_r(int j) { return static_cast<double>(j) / static_cast<double>(2 * (j - 1)); }

namespace {

void check_j(const Graph& g, int j) {
    if (j < 2) throw std::invalid_argument("j must be >= 2");
    if (j > g.n())
        throw std::invalid_argument("j = " + std::to_string(j) + " exceeds the vertex count " +
                                    std::to_string(g.n()));
}

// Assembles the n block matrices. Parameters select the four shapes:
// diag_block is the scalar on the upper-left diagonal (0, 1 or -1),
// column_sign/row_sign flip the off-diagonal blocks, include_identity
// adds e_i to the top-right column, corner is the (n,n) entry.
std::vector<Matrix> build_vertices(const Graph& g, double diag_block, bool include_identity,
                                   double column_sign, double row_sign, double corner) {
    const int n = g.n();
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Matrix a(n + 1, n + 1);
        for (int d = 0; d < n; ++d) a(d, d) = diag_block;
        for (int u = 0; u < n; ++u) {
            double top = g.adjacent(u, i) ? 1.0 : 0.0;
            if (include_identity && u == i) top += 1.0;
            a(u, n) = column_sign * top;
        }
        a(n, i) = row_sign;
        a(n, n) = corner;
        out.push_back(std::move(a));
    }
    return out;
}

ReductionInstance make_instance(const Graph& g, int j, ReductionKind kind,
                                std::vector<Matrix> vertices, double stored_r) {
    ReductionInstance inst{MatrixPolytope{std::move(vertices)}, g, j, stored_r, kind};
    inst.polytope.validate();
    return inst;
}

} // namespace

ReductionInstance build_min_radius_instance(const Graph& g, int j) {
    check_j(g, j);
    const double r = min_radius_r(j);
    return make_instance(g, j, ReductionKind::MinRadius,
                         build_vertices(g, 0.0, true, 1.0, 1.0, r), r);
}

ReductionInstance build_max_radius_instance(const Graph& g, int j) {
    check_j(g, j);
    const double r = max_radius_r(j);
    return make_instance(g, j, ReductionKind::MaxRadius,
                         build_vertices(g, 0.0, false, 1.0, 1.0, r), r);
}

// The m-matrix vertices are I - A_i with A_i from the min-radius family
// (their corner 1 - r equals 1/(j-1) exactly in rational arithmetic), and
// the hurwitz vertices are their negations. Building them through those
// identities keeps both relations entrywise exact in floating point.
ReductionInstance build_m_matrix_instance(const Graph& g, int j) {
    check_j(g, j);
    const double r = min_radius_r(j);
    std::vector<Matrix> vertices = build_vertices(g, 0.0, true, 1.0, 1.0, r);
    for (Matrix& a : vertices) a = Matrix::identity(g.n() + 1) - a;
    return make_instance(g, j, ReductionKind::MMatrix, std::move(vertices), r);
}

ReductionInstance build_hurwitz_instance(const Graph& g, int j) {
    check_j(g, j);
    const double r = min_radius_r(j);
    std::vector<Matrix> vertices = build_vertices(g, 0.0, true, 1.0, 1.0, r);
    for (Matrix& a : vertices) a = -(Matrix::identity(g.n() + 1) - a);
    return make_instance(g, j, ReductionKind::Hurwitz, std::move(vertices), -(1.0 - r));
}

ReductionInstance build_reduction(const Graph& g, int j, ReductionKind kind) {
    switch (kind) {
    case ReductionKind::MinRadius: return build_min_radius_instance(g, j);
    case ReductionKind::MaxRadius: return build_max_radius_instance(g, j);
    case ReductionKind::MMatrix: return build_m_matrix_instance(g, j);
    case ReductionKind::Hurwitz: return build_hurwitz_instance(g, j);
    }
    throw std::logic_error("unreachable reduction kind");
}

std::vector<double> BlockSpectrum::combination_eigenvalues() const {
    std::vector<double> ev;
    ev.reserve(static_cast<std::size_t>(zero_multiplicity) + 2);
    double repeated = 0.0, plus = lambda_plus, minus = lambda_minus;
    switch (kind) {
    case ReductionKind::MinRadius:
    case ReductionKind::MaxRadius:
        break;
    case ReductionKind::MMatrix: // spectrum of I - B_pi
        repeated = 1.0;
        plus = 1.0 - lambda_plus;
        minus = 1.0 - lambda_minus;
        break;
    case ReductionKind::Hurwitz: // spectrum of B_pi - I, negated m-matrix
        repeated = -1.0;
        plus = lambda_plus - 1.0;
        minus = lambda_minus - 1.0;
        break;
    }
    ev.assign(static_cast<std::size_t>(zero_multiplicity), repeated);
    ev.push_back(plus);
    ev.push_back(minus);
    std::sort(ev.begin(), ev.end());
    return ev;
}

double BlockSpectrum::combination_spectral_radius() const {
    double rho = 0.0;
    for (double ev : combination_eigenvalues()) rho = std::max(rho, std::abs(ev));
    return rho;
}

double BlockSpectrum::combination_spectral_abscissa() const {
    const auto ev = combination_eigenvalues();
    return ev.back(); // all real, sorted ascending
}

BlockSpectrum closed_form_spectrum(const ReductionInstance& inst, const SimplexPoint& pi) {
    if (pi.size() != inst.source.n())
        throw std::invalid_argument("closed_form_spectrum: weight length does not match graph");
    const bool shifted = inst.kind != ReductionKind::MaxRadius;
    const double q = quadratic_form(inst.source, pi, shifted);
    const double r =
        inst.kind == ReductionKind::MaxRadius ? max_radius_r(inst.j) : min_radius_r(inst.j);
    const double disc = std::sqrt(r * r + 4.0 * q);
    BlockSpectrum s;
    s.zero_multiplicity = inst.source.n() - 1;
    s.lambda_plus = 0.5 * (r + disc);
    s.lambda_minus = 0.5 * (r - disc);
    s.q = q;
    s.r = r;
    s.kind = inst.kind;
    return s;
}

} // namespace polystab
