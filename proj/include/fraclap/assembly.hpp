#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <mpfr.h>

#include "mesh.hpp"
#include "special.hpp"
#include "wide.hpp"

namespace fraclap {

/// Three-point second-difference stencil on a nonuniform pair of cells:
/// (2/(h_i + h_ip1)) (g_left/h_i - (1/h_i + 1/h_ip1) g_mid + g_right/h_ip1).
/// Exact on quadratics and annihilates affine functions.
template <class Real>
Real dh2_apply(Real h_i, Real h_ip1, Real g_left, Real g_mid, Real g_right) {
    if (!(h_i > 0) || !(h_ip1 > 0))
        throw std::invalid_argument("dh2_apply: cell widths must be positive");
    Real inv_l = Real(1) / h_i;
    Real inv_r = Real(1) / h_ip1;
    return (Real(2) / (h_i + h_ip1)) * (g_left * inv_l - (inv_l + inv_r) * g_mid + g_right * inv_r);
}

/// One row of the potential-quadrature coefficients: values[j-1] holds the
/// weight of the hat function centered at x_j, j = 1..2N-1, collocated at
/// node x_i. All entries are strictly positive.
struct QuadRow {
    int i;
    std::vector<double> values;
};

/// Analytic reference values tied to the quadrature row sums:
///   g0   boundary-cell contribution at x_0 (negative for x in (0, 2T))
///   g2N  boundary-cell contribution at x_{2N}
///   p    2 kappa/Gamma(4-alpha) |T - x|^{3-alpha}
///   q    kappa/Gamma(4-alpha) (x^{3-alpha} + (2T-x)^{3-alpha})
/// They satisfy sum_j atilde_ij = -(g0 + g2N) and
/// sum_j atilde_ij delta(x_j) = -p + q at every collocation node x_i.
struct AnalyticRowSums {
    double g0;
    double g2N;
    double p;
    double q;
};

namespace detail {

/// Nodes, inverse widths and shared constants promoted to extended
/// precision once per assembly.
struct WideMeshView {
    std::vector<wide> x;       // x_0..x_{2N}
    std::vector<wide> h;       // h[j] = x_j - x_{j-1} (exact), 1-based, h[0] unused
    std::vector<wide> inv_h;   // inv_h[j] = 1/h_j, 1-based, inv_h[0] unused
    wide exponent;             // 3 - alpha
    wide prefactor;            // kappa_alpha / Gamma(4 - alpha)
    int two_n;

    WideMeshView(const GradedMesh& mesh, const FracConstants& fc) {
        two_n = mesh.two_n();
        x.resize(static_cast<std::size_t>(two_n) + 1);
        for (int j = 0; j <= two_n; ++j)
            x[static_cast<std::size_t>(j)] = static_cast<wide>(mesh.x(j));
        h.resize(static_cast<std::size_t>(two_n) + 1);
        inv_h.resize(static_cast<std::size_t>(two_n) + 1);
        h[0] = 0;
        inv_h[0] = 0;
        for (int j = 1; j <= two_n; ++j) {
            h[static_cast<std::size_t>(j)] =
                x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j) - 1];
            inv_h[static_cast<std::size_t>(j)] = wide(1) / h[static_cast<std::size_t>(j)];
        }
        exponent = wide(3) - static_cast<wide>(fc.alpha);
        prefactor = static_cast<wide>(fc.kappa) / static_cast<wide>(fc.gamma_4ma);
    }

    /// |x_i - x_k|^{3-alpha}; the difference of two promoted doubles is
    /// exact, so only the power itself rounds.
    wide kernel_power(int i, int k) const {
        wide d = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(k)];
        return wide_pow(fabsq(d), exponent);
    }

    /// Fills pw[k] = |x_i - x_k|^{3-alpha} for k = 0..2N.
    void potential_powers(int i, std::vector<wide>& pw) const {
        pw.resize(static_cast<std::size_t>(two_n) + 1);
        for (int k = 0; k <= two_n; ++k)
            pw[static_cast<std::size_t>(k)] = kernel_power(i, k);
    }

    /// Fills row[j-1] = atilde_{i,j} for j = 1..2N-1 from precomputed powers.
    /// When mag is non-null, also records the magnitude of the largest term
    /// entering each entry; the entry's rounding noise is a small multiple
    /// of that magnitude times the arithmetic epsilon.
    void quad_row_from_powers(const std::vector<wide>& pw, std::vector<wide>& row,
                              std::vector<wide>* mag = nullptr) const {
        row.resize(static_cast<std::size_t>(two_n) - 1);
        if (mag)
            mag->resize(static_cast<std::size_t>(two_n) - 1);
        for (int j = 1; j < two_n; ++j) {
            const wide t_l = pw[static_cast<std::size_t>(j) - 1] * inv_h[static_cast<std::size_t>(j)];
            const wide t_m = (inv_h[static_cast<std::size_t>(j)] + inv_h[static_cast<std::size_t>(j) + 1]) *
                             pw[static_cast<std::size_t>(j)];
            const wide t_r = pw[static_cast<std::size_t>(j) + 1] * inv_h[static_cast<std::size_t>(j) + 1];
            row[static_cast<std::size_t>(j) - 1] = prefactor * (t_l - t_m + t_r);
            if (mag) {
                wide m = t_l > t_m ? t_l : t_m;
                if (t_r > m)
                    m = t_r;
                (*mag)[static_cast<std::size_t>(j) - 1] = prefactor * m;
            }
        }
    }
};

/// Machine epsilon of the extended-precision accumulator (2^-113).
constexpr double wide_eps = 9.63e-35;

/// Triggers for per-entry re-evaluation at 256-bit precision. An entry is
/// re-evaluated when its estimated cancellation noise could either flip its
/// sign (noise within sign_rescue_margin of the value) or pollute the row
/// sum at a level visible against the diagonal (noise above
/// rowsum_rescue_frac of the diagonal entry).
constexpr double sign_rescue_margin = 1e3;
constexpr double rowsum_rescue_frac = 1e-15;

/// 256-bit single-entry evaluator. On strongly graded meshes the entries
/// coupling a boundary-layer row to far columns are fourth mixed
/// differences whose terms exceed the result by up to (sep^2/(h_i h_j))^2;
/// near N = 800 with grading exponent 5 that ratio outruns even 113-bit
/// arithmetic. Entries flagged by the noise estimate are recomputed here
/// from the node coordinates; everything else keeps the fast path.
class HighPrecEntry {
public:
    HighPrecEntry(const GradedMesh& mesh, const FracConstants& fc) : mesh_(&mesh) {
        for (mpfr_ptr p : all_())
            mpfr_init2(p, 256);
        mpfr_set_d(e_, fc.alpha, MPFR_RNDN);
        mpfr_d_sub(e_, 3.0, e_, MPFR_RNDN);  // exact: alpha has 53 bits
        mpfr_set_d(c_, fc.kappa, MPFR_RNDN);
        mpfr_set_d(t0_, fc.gamma_4ma, MPFR_RNDN);
        mpfr_div(c_, c_, t0_, MPFR_RNDN);
    }
    ~HighPrecEntry() {
        for (mpfr_ptr p : all_())
            mpfr_clear(p);
    }
    HighPrecEntry(const HighPrecEntry&) = delete;
    HighPrecEntry& operator=(const HighPrecEntry&) = delete;

    /// a_ij for 1-based node indices i, j in 1..2N-1.
    double entry(int i, int j) const {
        stencil_weights_(i, u_);
        stencil_weights_(j, v_);
        mpfr_set_zero(acc_, 1);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                mpfr_set_d(t0_, mesh_->x(i - 1 + a), MPFR_RNDN);
                mpfr_sub_d(t0_, t0_, mesh_->x(j - 1 + b), MPFR_RNDN);
                mpfr_abs(t0_, t0_, MPFR_RNDN);
                mpfr_pow(t0_, t0_, e_, MPFR_RNDN);
                mpfr_mul(t0_, t0_, u_[a], MPFR_RNDN);
                mpfr_mul(t0_, t0_, v_[b], MPFR_RNDN);
                mpfr_add(acc_, acc_, t0_, MPFR_RNDN);
            }
        // acc now holds the D_i^2 x D_j^2 weight combination of the kernel;
        // scale by -2 kappa / (Gamma(4-alpha) (h_i + h_{i+1})).
        mpfr_set_d(t0_, mesh_->x(i + 1), MPFR_RNDN);
        mpfr_sub_d(t0_, t0_, mesh_->x(i - 1), MPFR_RNDN);
        mpfr_d_div(t0_, -2.0, t0_, MPFR_RNDN);
        mpfr_mul(acc_, acc_, t0_, MPFR_RNDN);
        mpfr_mul(acc_, acc_, c_, MPFR_RNDN);
        return mpfr_get_d(acc_, MPFR_RNDN);
    }

private:
    // weights (1/h_k, -(1/h_k + 1/h_{k+1}), 1/h_{k+1}) around node k
    void stencil_weights_(int k, mpfr_t w[3]) const {
        mpfr_set_d(t0_, mesh_->x(k), MPFR_RNDN);
        mpfr_sub_d(t0_, t0_, mesh_->x(k - 1), MPFR_RNDN);
        mpfr_ui_div(w[0], 1, t0_, MPFR_RNDN);
        mpfr_set_d(t0_, mesh_->x(k + 1), MPFR_RNDN);
        mpfr_sub_d(t0_, t0_, mesh_->x(k), MPFR_RNDN);
        mpfr_ui_div(w[2], 1, t0_, MPFR_RNDN);
        mpfr_add(w[1], w[0], w[2], MPFR_RNDN);
        mpfr_neg(w[1], w[1], MPFR_RNDN);
    }

    std::array<mpfr_ptr, 10> all_() {
        return {e_, c_, acc_, t0_, u_[0], u_[1], u_[2], v_[0], v_[1], v_[2]};
    }

    const GradedMesh* mesh_;
    mutable mpfr_t e_, c_, acc_, t0_, u_[3], v_[3];
};

}  // namespace detail

/// Quadrature coefficient atilde_{ij}: the potential of the hat function at
/// x_j evaluated at collocation node x_i,
/// (kappa/Gamma(4-alpha)) (|x_i-x_{j-1}|^{3-a}/h_j
///                         - (1/h_j + 1/h_{j+1}) |x_i-x_j|^{3-a}
///                         + |x_i-x_{j+1}|^{3-a}/h_{j+1}).
/// Valid for every collocation index i in 0..2N including the boundary.
inline double riesz_potential_hat(const GradedMesh& mesh, double alpha, int i, int j) {
    const int two_n = mesh.two_n();
    if (i < 0 || i > two_n)
        throw std::out_of_range("riesz_potential_hat: collocation index out of range");
    if (j < 1 || j > two_n - 1)
        throw std::out_of_range("riesz_potential_hat: hat index out of range");
    detail::WideMeshView view(mesh, make_frac_constants(alpha));
    detail::wide term =
        view.kernel_power(i, j - 1) * view.inv_h[static_cast<std::size_t>(j)] -
        (view.inv_h[static_cast<std::size_t>(j)] + view.inv_h[static_cast<std::size_t>(j) + 1]) *
            view.kernel_power(i, j) +
        view.kernel_power(i, j + 1) * view.inv_h[static_cast<std::size_t>(j) + 1];
    return static_cast<double>(view.prefactor * term);
}

/// Full quadrature row at collocation node x_i (see riesz_potential_hat).
inline QuadRow riesz_potential_row(const GradedMesh& mesh, double alpha, int i) {
    const int two_n = mesh.two_n();
    if (i < 0 || i > two_n)
        throw std::out_of_range("riesz_potential_row: collocation index out of range");
    detail::WideMeshView view(mesh, make_frac_constants(alpha));
    std::vector<detail::wide> pw, row;
    view.potential_powers(i, pw);
    view.quad_row_from_powers(pw, row);
    QuadRow out;
    out.i = i;
    out.values.resize(row.size());
    for (std::size_t k = 0; k < row.size(); ++k)
        out.values[k] = static_cast<double>(row[k]);
    return out;
}

/// Analytic counterparts of the quadrature row sums at an arbitrary point
/// x in [0, 2T]. Computed in extended precision internally; the returned
/// doubles are correct to rounding even where the defining differences
/// cancel heavily.
inline AnalyticRowSums analytic_row_sums(const GradedMesh& mesh, double alpha, double x) {
    const double two_t = 2.0 * mesh.params().T;
    if (!(x >= 0.0 && x <= two_t))
        throw std::domain_error("analytic_row_sums: x outside [0, 2T]");
    FracConstants fc = make_frac_constants(alpha);
    detail::WideMeshView view(mesh, fc);
    using detail::wide;
    const wide xq = static_cast<wide>(x);
    const wide e = view.exponent;
    const wide c = view.prefactor;
    const int two_n = mesh.two_n();

    wide g0 = -c * view.inv_h[1] *
              detail::wide_pow_diff(fabsq(xq - view.x[0]), fabsq(xq - view.x[1]), e);

    wide g2N = -c * view.inv_h[static_cast<std::size_t>(two_n)] *
               detail::wide_pow_diff(fabsq(view.x[static_cast<std::size_t>(two_n)] - xq),
                                     fabsq(view.x[static_cast<std::size_t>(two_n) - 1] - xq), e);

    const wide tq = static_cast<wide>(mesh.params().T);
    wide p = 2 * c * detail::wide_pow(fabsq(tq - xq), e);
    wide q = c * (detail::wide_pow(xq, e) + detail::wide_pow(2 * tq - xq, e));

    return AnalyticRowSums{static_cast<double>(g0), static_cast<double>(g2N),
                           static_cast<double>(p), static_cast<double>(q)};
}

/// Expected row sum of the assembled stiffness matrix at interior node i:
/// the three-point second-difference stencil applied to g0 + g2N. The
/// stencil is evaluated entirely in extended precision, and the power
/// differences inside g0 and g2N go through the cancellation-free form:
/// near the boundaries they shrink to ~h/T of either term, and the
/// stencil then amplifies any absolute noise in them by ~1/h^2, which
/// would otherwise leave the reference itself noisier than the matrix
/// it is meant to check.
inline double stiffness_row_sum_reference(const GradedMesh& mesh, double alpha, int i) {
    const int two_n = mesh.two_n();
    if (i < 1 || i > two_n - 1)
        throw std::out_of_range("stiffness_row_sum_reference: interior index out of range");
    using detail::wide;
    detail::WideMeshView view(mesh, make_frac_constants(alpha));
    const wide e = view.exponent;
    const wide c = view.prefactor;
    auto g_sum = [&](wide xq) {
        wide g0 = -c * view.inv_h[1] *
                  detail::wide_pow_diff(fabsq(xq - view.x[0]), fabsq(xq - view.x[1]), e);
        wide g2N = -c * view.inv_h[static_cast<std::size_t>(two_n)] *
                   detail::wide_pow_diff(fabsq(view.x[static_cast<std::size_t>(two_n)] - xq),
                                         fabsq(view.x[static_cast<std::size_t>(two_n) - 1] - xq), e);
        return g0 + g2N;
    };
    const wide inv_l = view.inv_h[static_cast<std::size_t>(i)];
    const wide inv_r = view.inv_h[static_cast<std::size_t>(i) + 1];
    const wide scale =
        wide(2) / (view.h[static_cast<std::size_t>(i)] + view.h[static_cast<std::size_t>(i) + 1]);
    wide v = scale * (g_sum(view.x[static_cast<std::size_t>(i) - 1]) * inv_l -
                      (inv_l + inv_r) * g_sum(view.x[static_cast<std::size_t>(i)]) +
                      g_sum(view.x[static_cast<std::size_t>(i) + 1]) * inv_r);
    return static_cast<double>(v);
}

/// Expected boundary-distance-weighted row sum of the stiffness matrix at
/// interior node i: the second-difference stencil applied to p - q, where
/// p and q are the analytic weighted potentials. The stencil is rewritten
/// as a combination of differences p(x_k) - p(x_i), q(x_k) - q(x_i) of
/// adjacent nodes, each formed through the cancellation-free power
/// difference; composing the stencil from rounded point values instead
/// would lose all accuracy in the boundary layer, where the node spacing
/// drops far below the square root of machine epsilon.
inline double stiffness_weighted_row_sum_reference(const GradedMesh& mesh, double alpha, int i) {
    const int two_n = mesh.two_n();
    if (i < 1 || i > two_n - 1)
        throw std::out_of_range(
            "stiffness_weighted_row_sum_reference: interior index out of range");
    using detail::wide;
    detail::WideMeshView view(mesh, make_frac_constants(alpha));
    const wide e = view.exponent;
    const wide c = view.prefactor;
    const wide tq = static_cast<wide>(mesh.params().T);
    // (p - q)(xa) - (p - q)(xb) without evaluating p or q on their own
    auto pq_diff = [&](wide xa, wide xb) {
        wide pd = 2 * c * detail::wide_pow_diff(fabsq(tq - xa), fabsq(tq - xb), e);
        wide qd = c * (detail::wide_pow_diff(xa, xb, e) +
                       detail::wide_pow_diff(2 * tq - xa, 2 * tq - xb, e));
        return pd - qd;
    };
    const wide xl = view.x[static_cast<std::size_t>(i) - 1];
    const wide xm = view.x[static_cast<std::size_t>(i)];
    const wide xr = view.x[static_cast<std::size_t>(i) + 1];
    const wide inv_l = view.inv_h[static_cast<std::size_t>(i)];
    const wide inv_r = view.inv_h[static_cast<std::size_t>(i) + 1];
    const wide scale =
        wide(2) / (view.h[static_cast<std::size_t>(i)] + view.h[static_cast<std::size_t>(i) + 1]);
    wide v = scale * (pq_diff(xl, xm) * inv_l + pq_diff(xr, xm) * inv_r);
    return static_cast<double>(v);
}

/// Dense collocation matrix of the scheme: A U = F with
/// a_ij = -(2/(h_i + h_{i+1})) (atilde_{i-1,j}/h_i
///        - (1/h_i + 1/h_{i+1}) atilde_{i,j} + atilde_{i+1,j}/h_{i+1}).
/// Rows and columns use 0-based interior indices 0..2N-2 for nodes
/// x_1..x_{2N-1}. The matrix has a positive diagonal, negative
/// off-diagonal entries and strictly positive row sums.
class StiffnessMatrix {
public:
    StiffnessMatrix(int n, std::vector<double> entries, GradedMesh mesh, double alpha)
        : n_(n), entries_(std::move(entries)), mesh_(std::move(mesh)), alpha_(alpha) {}

    int n() const { return n_; }
    double alpha() const { return alpha_; }
    const GradedMesh& mesh() const { return mesh_; }
    const std::vector<double>& entries() const { return entries_; }

    double entry(int row, int col) const {
        return entries_[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_) +
                        static_cast<std::size_t>(col)];
    }
    const double* row_data(int row) const {
        return entries_.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(n_);
    }

    /// Row sum accumulated in extended precision (the row mixes a large
    /// positive diagonal with negative off-diagonal entries).
    double row_sum(int row) const { return detail::wide_sum(row_data(row), static_cast<std::size_t>(n_)); }

private:
    int n_;
    std::vector<double> entries_;
    GradedMesh mesh_;
    double alpha_;
};

/// Assembles the dense collocation matrix.
///
/// The quadrature coefficients are second differences of s -> s^{3-alpha}
/// and cancel to many digits on strongly graded meshes, so all internal
/// arithmetic runs in extended precision; entries are rounded to double
/// once fully formed. A per-entry noise bound is tracked alongside, and
/// the few entries whose bound could flip their sign or distort the row
/// sum (boundary-layer rows against far columns, at strong grading and
/// large N) are re-evaluated at 256-bit precision. Every row is computed
/// from the stored node coordinates; the two halves of the mesh are not
/// exact reflections of each other in floating point, so no symmetry
/// shortcut is taken. Throws if the resulting sign pattern (positive
/// diagonal, negative off-diagonal) is violated, which would indicate an
/// implementation bug rather than bad input.
inline StiffnessMatrix assemble_stiffness(const GradedMesh& mesh, double alpha) {
    using detail::wide;
    const FracConstants fc = make_frac_constants(alpha);
    const detail::WideMeshView view(mesh, fc);
    const detail::HighPrecEntry rescue(mesh, fc);
    const int two_n = mesh.two_n();
    const int n = two_n - 1;
    std::vector<double> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));

    // Rolling window of three quadrature rows (values and term-magnitude
    // bounds); slot k holds row (i-1+k) while stiffness row i is formed.
    struct WindowRow {
        std::vector<wide> val, mag;
    };
    WindowRow rows[3];
    std::vector<wide> pw;
    auto compute_row = [&](int i, WindowRow& out) {
        view.potential_powers(i, pw);
        view.quad_row_from_powers(pw, out.val, &out.mag);
    };

    compute_row(0, rows[0]);
    compute_row(1, rows[1]);
    std::vector<double> noise(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        WindowRow& upper = rows[(i + 1) % 3];
        compute_row(i + 1, upper);
        const WindowRow& lower = rows[(i - 1) % 3];
        const WindowRow& mid = rows[i % 3];
        const wide inv_l = view.inv_h[static_cast<std::size_t>(i)];
        const wide inv_r = view.inv_h[static_cast<std::size_t>(i) + 1];
        const wide scale =
            wide(-2) / (view.h[static_cast<std::size_t>(i)] + view.h[static_cast<std::size_t>(i) + 1]);
        const wide noise_unit = wide(8) * wide(detail::wide_eps) * (-scale) * (inv_l + inv_r);
        double* dst = entries.data() + static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n);
        for (int k = 0; k < n; ++k) {
            wide v = scale * (lower.val[static_cast<std::size_t>(k)] * inv_l -
                              (inv_l + inv_r) * mid.val[static_cast<std::size_t>(k)] +
                              upper.val[static_cast<std::size_t>(k)] * inv_r);
            dst[k] = static_cast<double>(v);
            wide m = lower.mag[static_cast<std::size_t>(k)];
            if (mid.mag[static_cast<std::size_t>(k)] > m)
                m = mid.mag[static_cast<std::size_t>(k)];
            if (upper.mag[static_cast<std::size_t>(k)] > m)
                m = upper.mag[static_cast<std::size_t>(k)];
            noise[static_cast<std::size_t>(k)] = static_cast<double>(noise_unit * m);
        }
        const double diag = dst[i - 1];
        for (int k = 0; k < n; ++k) {
            if (k == i - 1)
                continue;
            const double eta = noise[static_cast<std::size_t>(k)];
            if (eta >= detail::rowsum_rescue_frac * diag ||
                std::abs(dst[k]) <= detail::sign_rescue_margin * eta)
                dst[k] = rescue.entry(i, k + 1);
        }
    }

    for (int row = 0; row < n; ++row) {
        const double* a = entries.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(n);
        for (int col = 0; col < n; ++col) {
            bool ok = (row == col) ? (a[col] > 0.0) : (a[col] < 0.0);
            if (!ok)
                throw std::runtime_error(
                    "assemble_stiffness: sign pattern violated at row " + std::to_string(row) +
                    ", col " + std::to_string(col) + " (implementation bug)");
        }
    }
    return StiffnessMatrix(n, std::move(entries), mesh, alpha);
}

/// Dense matvec A v with extended-precision accumulation per row.
inline std::vector<double> apply_operator(const StiffnessMatrix& A, const std::vector<double>& v) {
    const int n = A.n();
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("apply_operator: dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int row = 0; row < n; ++row)
        out[static_cast<std::size_t>(row)] =
            detail::wide_dot(A.row_data(row), v.data(), static_cast<std::size_t>(n));
    return out;
}

/// Plain-text matrix dump for debugging and cross-implementation diffs:
/// header line "n alpha r T N", then n rows of n entries with 17
/// significant digits.
inline void dump_matrix(const StiffnessMatrix& A, std::ostream& os) {
    const ProblemParams& p = A.mesh().params();
    char buf[32];
    os << A.n() << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", A.alpha());
    os << buf << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", p.r);
    os << buf << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", p.T);
    os << buf << ' ' << p.N << '\n';
    for (int row = 0; row < A.n(); ++row) {
        const double* a = A.row_data(row);
        for (int col = 0; col < A.n(); ++col) {
            std::snprintf(buf, sizeof buf, "%.17g", a[col]);
            os << buf << (col + 1 < A.n() ? ' ' : '\n');
        }
    }
}

}  // namespace fraclap
