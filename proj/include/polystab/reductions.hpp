#pragma once

#include <string>
#include <vector>

#include "polystab/graph.hpp"
#include "polystab/matrix.hpp"
#include "polystab/simplex.hpp"

namespace polystab {

// Convex hull of k vertex matrices, P = Conv{A_1,...,A_k}. All matrices
// are square with equal dimension and finite entries.
struct MatrixPolytope {
    std::vector<Matrix> matrices;

    int k() const { return static_cast<int>(matrices.size()); }
    int dim() const { return matrices.empty() ? 0 : matrices.front().rows(); }

    // Enforces k >= 1, equal square shapes, finite entries.
    void validate() const;
};

// B = sum_i pi_i A_i.
Matrix convex_combination(const MatrixPolytope& p, const SimplexPoint& pi);

enum class ReductionKind { MinRadius, MaxRadius, MMatrix, Hurwitz };

std::string to_string(ReductionKind kind);
ReductionKind reduction_kind_from_string(const std::string& s);

// A graph-derived matrix polytope. Given a graph on n vertices with
// adjacency matrix C (columns c_i) and a threshold j >= 2, each builder
// emits n block matrices of size (n+1) x (n+1):
//
//   min-radius:  A_i = [ 0      e_i+c_i ]     r = 1 - 1/(j-1)
//                      [ e_i'   r       ]
//
//   max-radius:  A_i = [ 0      c_i     ]     r = 1/2 + 1/(2(j-1))
//                      [ e_i'   r       ]
//
//   m-matrix:    A_i = [ I     -(e_i+c_i)]    corner 1/(j-1); equals
//                      [-e_i'   1/(j-1) ]     I - (min-radius A_i)
//
//   hurwitz:     A_i = [-I      e_i+c_i ]     corner -1/(j-1); equals
//                      [ e_i'  -1/(j-1) ]     -(m-matrix A_i)
//
// The convex combination B_pi inherits the same block shape, which gives
// its spectrum in closed form (see closed_form_spectrum below).
struct ReductionInstance {
    MatrixPolytope polytope;
    Graph source;
    int j = 2;
    double r = 0.0; // stored scalar: base r for min/max-radius and m-matrix, -1/(j-1) for hurwitz
    ReductionKind kind = ReductionKind::MinRadius;
};

// Each builder requires 2 <= j <= g.n(). The scalar r is formed from the
// integer j with a single division so no rounding compounds across the
// vertex matrices.
ReductionInstance build_min_radius_instance(const Graph& g, int j);
ReductionInstance build_max_radius_instance(const Graph& g, int j);
ReductionInstance build_m_matrix_instance(const Graph& g, int j);
ReductionInstance build_hurwitz_instance(const Graph& g, int j);

ReductionInstance build_reduction(const Graph& g, int j, ReductionKind kind);

// Spectrum of the blocked combination, computed analytically. The
// underlying block matrix B_pi (the min/max-radius shape) has eigenvalues
//
//   { 0 with multiplicity n-1,  (r +- sqrt(r^2 + 4q)) / 2 }
//
// with q = pi'(I+C)pi for the shifted constructions (min-radius, m-matrix,
// hurwitz) and q = pi'C pi for max-radius. The m-matrix combination is
// I - B_pi, so its spectrum is the image 1 - lambda; the hurwitz
// combination negates that. lambda_plus/lambda_minus always refer to the
// underlying B_pi.
struct BlockSpectrum {
    int zero_multiplicity = 0; // n - 1
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double q = 0.0; // quadratic form value
    double r = 0.0; // base scalar used in the formula
    ReductionKind kind = ReductionKind::MinRadius;

    // Full eigenvalue list of the instance's convex combination, ascending.
    std::vector<double> combination_eigenvalues() const;
    double combination_spectral_radius() const;
    double combination_spectral_abscissa() const;
};

BlockSpectrum closed_form_spectrum(const ReductionInstance& inst, const SimplexPoint& pi);

// Base scalars as functions of j.
double min_radius_r(int j); // 1 - 1/(j-1)
double max_radius_r(int j); // 1/2 + 1/(2(j-1))

} // namespace polystab
