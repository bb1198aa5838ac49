#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "assembly.hpp"
#include "mesh.hpp"
#include "special.hpp"
#include "wide.hpp"

namespace fraclap {

/// Diagonal right-scaling lambda I + mu G, where G holds the boundary
/// distances of the interior nodes. Applied as a column scaling of the
/// collocation matrix it yields a strictly diagonally dominant system.
struct DiagPreconditioner {
    double lambda;
    double mu;
    std::vector<double> diag;  ///< diag[j-1] = lambda + mu * delta(x_j), j = 1..2N-1
};

/// Scaling parameters that make the column-scaled matrix strictly
/// diagonally dominant: lambda = 1 + 2^{r(alpha-1)} T,
/// mu = (alpha-1) 2^{-r alpha - 1}.
struct PrecondParams {
    double lambda;
    double mu;
};

inline PrecondParams precond_params(double alpha, double r, double T) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("precond_params: alpha must lie in (1, 2)");
    if (!(r >= 1.0))
        throw std::invalid_argument("precond_params: r must be >= 1");
    if (!(T > 0.0))
        throw std::invalid_argument("precond_params: T must be positive");
    double lambda = 1.0 + std::pow(2.0, r * (alpha - 1.0)) * T;
    double mu = (alpha - 1.0) * std::pow(2.0, -r * alpha - 1.0);
    return PrecondParams{lambda, mu};
}

/// Builds the diagonal lambda + mu * delta(x_j) over the interior nodes.
/// lambda = 0 is allowed (all interior boundary distances are positive,
/// so the diagonal stays positive); it is used by the diagnostic that
/// scales by G alone.
inline DiagPreconditioner build_preconditioner(const GradedMesh& mesh, double lambda, double mu) {
    if (!(lambda >= 0.0) || !(mu >= 0.0))
        throw std::invalid_argument("build_preconditioner: lambda and mu must be nonnegative");
    const int n = mesh.n_interior();
    std::vector<double> diag(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        diag[static_cast<std::size_t>(j) - 1] = lambda + mu * mesh.boundary_distance(j);
    return DiagPreconditioner{lambda, mu, std::move(diag)};
}

/// Dense square matrix produced by the column scaling; plain storage with
/// no structural metadata.
struct SquareMatrix {
    int n;
    std::vector<double> entries;

    const double* row_data(int row) const {
        return entries.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(n);
    }
    double entry(int row, int col) const {
        return entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(col)];
    }
};

/// B = A (lambda I + mu G): column j of A scaled by diag[j]. A itself is
/// left untouched.
inline SquareMatrix build_B(const StiffnessMatrix& A, const DiagPreconditioner& P) {
    const int n = A.n();
    if (static_cast<int>(P.diag.size()) != n)
        throw std::invalid_argument("build_B: dimension mismatch");
    SquareMatrix B;
    B.n = n;
    B.entries.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int row = 0; row < n; ++row) {
        const double* src = A.row_data(row);
        double* dst = B.entries.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(n);
        for (int col = 0; col < n; ++col)
            dst[col] = src[col] * P.diag[static_cast<std::size_t>(col)];
    }
    return B;
}

/// Structural summary of a square matrix: per-row sums (extended-precision
/// accumulation), their minimum, the number of rows with nonpositive sum,
/// and the count of sign-pattern violations (diagonal not strictly
/// positive or off-diagonal not strictly negative).
struct DominanceReport {
    std::vector<double> row_sums;
    double min_row_sum;
    int nonpositive_row_sums;
    int sign_violations;
};

inline DominanceReport dominance_report(const double* entries, int n) {
    DominanceReport rep;
    rep.row_sums.resize(static_cast<std::size_t>(n));
    rep.sign_violations = 0;
    rep.nonpositive_row_sums = 0;
    for (int row = 0; row < n; ++row) {
        const double* a = entries + static_cast<std::size_t>(row) * static_cast<std::size_t>(n);
        for (int col = 0; col < n; ++col) {
            bool ok = (row == col) ? (a[col] > 0.0) : (a[col] < 0.0);
            if (!ok)
                ++rep.sign_violations;
        }
        double s = detail::wide_sum(a, static_cast<std::size_t>(n));
        rep.row_sums[static_cast<std::size_t>(row)] = s;
        if (!(s > 0.0))
            ++rep.nonpositive_row_sums;
    }
    rep.min_row_sum = rep.row_sums.empty()
                          ? 0.0
                          : *std::min_element(rep.row_sums.begin(), rep.row_sums.end());
    return rep;
}

inline DominanceReport dominance_report(const SquareMatrix& M) {
    return dominance_report(M.entries.data(), M.n);
}

inline DominanceReport dominance_report(const StiffnessMatrix& A) {
    return dominance_report(A.entries().data(), A.n());
}

/// Constant in the row-sum lower bound of the collocation matrix:
/// sum_j a_ij >= C (x_i^{-alpha} + (2T-x_i)^{-alpha}) with
/// C = kappa_alpha (alpha-1) / Gamma(2-alpha) * 2^{-r alpha}.
inline double row_sum_lower_constant(double alpha, double r) {
    FracConstants fc = make_frac_constants(alpha);
    return fc.kappa * (alpha - 1.0) / fc.gamma_2ma * std::pow(2.0, -r * alpha);
}

/// Constant 2 kappa_alpha / Gamma(2-alpha) appearing in the lower bound of
/// the distance-weighted row sums. Diagnostic value only.
inline double weighted_row_sum_constant(double alpha) {
    FracConstants fc = make_frac_constants(alpha);
    return 2.0 * fc.kappa / fc.gamma_2ma;
}

/// Constant kappa_alpha 2^{r(alpha-1)} / Gamma(2-alpha) tied to the
/// G-only scaling diagnostic. Diagnostic value only.
inline double scaled_row_sum_constant(double alpha, double r) {
    FracConstants fc = make_frac_constants(alpha);
    return fc.kappa * std::pow(2.0, r * (alpha - 1.0)) / fc.gamma_2ma;
}

}  // namespace fraclap
