// Acceptance gate for the discretization, scaling, and study pipeline.
// Each criterion prints a single PASS/FAIL line; the exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "fraclap/fraclap.hpp"

using namespace fraclap;

namespace {

int g_failures = 0;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return std::string(buf);
}

void announce(int k, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %d  %-46s  %s%s%s\n", k, name, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  ", detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

double rel_dev(double v, double ref) { return std::fabs(v - ref) / std::fabs(ref); }

std::vector<double> delta_vector(const GradedMesh& mesh) {
    std::vector<double> d(static_cast<std::size_t>(mesh.n_interior()));
    for (int j = 1; j <= mesh.n_interior(); ++j)
        d[static_cast<std::size_t>(j) - 1] = mesh.boundary_distance(j);
    return d;
}

double min_entry(const std::vector<double>& v) {
    double m = v[0];
    for (double x : v)
        m = std::min(m, x);
    return m;
}

// --------------------------------------------------------------------------
// criteria 1 and 2: reproduce the stored reference tables within tolerance

void check_table(int criterion, int table, double seconds_budget) {
    try {
        auto t0 = std::chrono::steady_clock::now();
        StudyConfig cfg;
        cfg.table = table;
        std::vector<ConvergenceReport> reports = run_study(cfg);
        std::vector<std::string> failures = check_against_baseline(reports, table, cfg.sigma);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const std::string& f : failures)
            std::fprintf(stderr, "  table %d: %s\n", table, f.c_str());
        bool in_budget = dt < seconds_budget;
        std::string detail;
        if (failures.empty())
            detail = fmt("16 of 16 cells within tolerance in %.0f s", dt);
        else
            detail = fmt("%zu check(s) failed, first: %s", failures.size(), failures[0].c_str());
        if (!in_budget)
            detail += fmt(" (took %.0f s, budget %.0f s)", dt, seconds_budget);
        announce(criterion, table == 1 ? "reference table 1 (exact error)" :
                                         "reference table 2 (self convergence)",
                 failures.empty() && in_budget, detail);
    } catch (const std::exception& e) {
        announce(criterion, table == 1 ? "reference table 1 (exact error)" :
                                         "reference table 2 (self convergence)",
                 false, fmt("exception: %s", e.what()));
    }
}

// --------------------------------------------------------------------------
// criteria 3, 4, and the small-mesh part of 5, sharing one assembly sweep

struct SweepOutcome {
    long sign_violations = 0;
    long bound_violations = 0;
    double min_bound_ratio = std::numeric_limits<double>::infinity();
    long b_sign_violations = 0;
    long b_nonpositive = 0;
    long b_bound_violations = 0;
    double min_b_bound_ratio = std::numeric_limits<double>::infinity();
    int grids_with_nonpositive_scaled = 0;
    int grids = 0;
    double worst_plain = 0.0;
    double worst_weighted = 0.0;
    double worst_stiffness = 0.0;
};

SweepOutcome run_sweep() {
    SweepOutcome out;
    for (double alpha : {1.2, 1.5, 1.8})
        for (double r : {1.0, 4.0 / alpha, 5.0})
            for (int N : {8, 16, 32, 64}) {
                GradedMesh mesh = build_mesh({alpha, r, 0.5, N});
                StiffnessMatrix A = assemble_stiffness(mesh, alpha);
                const int n = A.n();
                const std::vector<double> delta = delta_vector(mesh);
                ++out.grids;

                // sign pattern and row-sum lower bound of the plain matrix
                DominanceReport rep = dominance_report(A);
                out.sign_violations += rep.sign_violations;
                double c_a = row_sum_lower_constant(alpha, r);
                for (int i = 1; i <= n; ++i) {
                    double xi = mesh.x(i);
                    double bound = c_a * (std::pow(xi, -alpha) + std::pow(1.0 - xi, -alpha));
                    double ratio = rep.row_sums[static_cast<std::size_t>(i) - 1] / bound;
                    out.min_bound_ratio = std::min(out.min_bound_ratio, ratio);
                    if (ratio < 1.0 - 1e-12)
                        ++out.bound_violations;
                }

                // column-scaled matrix: dominance plus the augmented bound
                PrecondParams pp = precond_params(alpha, r, 0.5);
                DiagPreconditioner P = build_preconditioner(mesh, pp.lambda, pp.mu);
                SquareMatrix B = build_B(A, P);
                DominanceReport repB = dominance_report(B);
                out.b_sign_violations += repB.sign_violations;
                out.b_nonpositive += repB.nonpositive_row_sums;
                double h_center = mesh.width(mesh.params().N);
                for (int i = 1; i <= n; ++i) {
                    double xi = mesh.x(i);
                    double di = mesh.boundary_distance(i);
                    double bound = c_a * (std::pow(xi, -alpha) + std::pow(1.0 - xi, -alpha) +
                                          std::pow(0.5 - di + h_center, 1.0 - alpha));
                    double ratio = repB.row_sums[static_cast<std::size_t>(i) - 1] / bound;
                    out.min_b_bound_ratio = std::min(out.min_b_bound_ratio, ratio);
                    if (ratio < 1.0 - 1e-12)
                        ++out.b_bound_violations;
                }

                // scaling by the distance alone loses dominance somewhere
                DiagPreconditioner dist_only = build_preconditioner(mesh, 0.0, 1.0);
                if (dominance_report(build_B(A, dist_only)).nonpositive_row_sums > 0)
                    ++out.grids_with_nonpositive_scaled;

                // quadrature and stencil identities against the closed forms
                for (int i = 0; i <= mesh.two_n(); ++i) {
                    QuadRow row = riesz_potential_row(mesh, alpha, i);
                    AnalyticRowSums s = analytic_row_sums(mesh, alpha, mesh.x(i));
                    double plain = detail::wide_sum(row.values.data(), row.values.size());
                    double weighted =
                        detail::wide_dot(row.values.data(), delta.data(), delta.size());
                    out.worst_plain =
                        std::max(out.worst_plain, rel_dev(plain, -(s.g0 + s.g2N)));
                    out.worst_weighted =
                        std::max(out.worst_weighted, rel_dev(weighted, -s.p + s.q));
                }
                for (int i = 1; i <= n; ++i)
                    out.worst_stiffness =
                        std::max(out.worst_stiffness,
                                 rel_dev(A.row_sum(i - 1),
                                         stiffness_row_sum_reference(mesh, alpha, i)));
            }
    return out;
}

// large meshes: the same identities at the relaxed threshold

struct LargeOutcome {
    double worst_plain = 0.0;
    double worst_weighted = 0.0;
    double worst_stiffness = 0.0;
};

std::vector<int> sampled_rows(int two_n) {
    std::vector<int> rows;
    for (int i : {0, 1, 2, 3, two_n / 2 - 1, two_n / 2, two_n / 2 + 1, two_n - 3, two_n - 2,
                  two_n - 1, two_n})
        rows.push_back(i);
    for (int i = 0; i <= two_n; i += std::max(1, two_n / 40))
        rows.push_back(i);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

LargeOutcome run_large() {
    LargeOutcome out;
    const struct {
        double alpha, r;
        int N;
    } grids[] = {{1.2, 5.0, 800}, {1.8, 5.0, 800}, {1.2, 10.0 / 3.0, 1600}, {1.5, 1.0, 1600}};
    for (const auto& g : grids) {
        GradedMesh mesh = build_mesh({g.alpha, g.r, 0.5, g.N});
        StiffnessMatrix A = assemble_stiffness(mesh, g.alpha);
        const std::vector<double> delta = delta_vector(mesh);
        for (int i = 1; i <= A.n(); ++i)
            out.worst_stiffness = std::max(
                out.worst_stiffness,
                rel_dev(A.row_sum(i - 1), stiffness_row_sum_reference(mesh, g.alpha, i)));
        for (int i : sampled_rows(mesh.two_n())) {
            QuadRow row = riesz_potential_row(mesh, g.alpha, i);
            AnalyticRowSums s = analytic_row_sums(mesh, g.alpha, mesh.x(i));
            double plain = detail::wide_sum(row.values.data(), row.values.size());
            double weighted = detail::wide_dot(row.values.data(), delta.data(), delta.size());
            out.worst_plain = std::max(out.worst_plain, rel_dev(plain, -(s.g0 + s.g2N)));
            out.worst_weighted = std::max(out.worst_weighted, rel_dev(weighted, -s.p + s.q));
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// criterion 6: scaled consistency defect stays bounded under refinement

void check_defect_scaling() {
    try {
        bool ok = true;
        double worst_growth = 0.0;
        for (double alpha : {1.2, 1.8})
            for (double r : {1.0, 4.0 / alpha}) {
                double prev = -1.0;
                for (int N : {50, 100, 200, 400}) {
                    GradedMesh mesh = build_mesh({alpha, r, 0.5, N});
                    StiffnessMatrix A = assemble_stiffness(mesh, alpha);
                    std::vector<double> F = sample_source(SourceTerm::one(), alpha, mesh);
                    std::vector<double> exact =
                        exact_nodal(ExactSolution::getoor(), alpha, mesh);
                    std::vector<double> tau = truncation_error(A, exact, F);
                    double h = mesh.h();
                    double h_center = mesh.width(mesh.params().N);
                    double hx = std::pow(h, std::min(r * alpha / 2.0, 2.0));
                    double ratio = 0.0;
                    for (int i = 1; i <= A.n(); ++i) {
                        double di = mesh.boundary_distance(i);
                        double denom = hx * std::pow(di, -alpha) +
                                       (r - 1.0) * h * h *
                                           std::pow(0.5 - di + h_center, 1.0 - alpha);
                        ratio = std::max(
                            ratio, std::fabs(tau[static_cast<std::size_t>(i) - 1]) / denom);
                    }
                    if (prev > 0.0) {
                        worst_growth = std::max(worst_growth, ratio / prev);
                        ok = ok && ratio <= 2.0 * prev;
                    }
                    prev = ratio;
                }
            }
        announce(6, "scaled defect bounded under refinement", ok,
                 fmt("worst consecutive growth %.3f (limit 2)", worst_growth));
    } catch (const std::exception& e) {
        announce(6, "scaled defect bounded under refinement", false,
                 fmt("exception: %s", e.what()));
    }
}

// --------------------------------------------------------------------------
// criterion 7: solver cross-validation, residual gate, nonnegativity

void check_solvers() {
    try {
        // Constant-source configurations run at N = 100 with the shared
        // 1e-10 gate. The singular-source ones run at the coarsest
        // resolution their study actually solves (N = 50) and at tighter
        // tolerances: their right-hand side norm grows like
        // x_1^{sigma - alpha}, so a residual measured against ||F||_inf
        // controls the solution only weakly on strongly graded meshes, and
        // the iteration must be pushed near the double-precision floor for
        // the solutions themselves to line up.
        const struct {
            double alpha, r;
            bool power;
            int N;
            double tol;
        } configs[] = {{1.2, 1.0, false, 100, 1e-10},
                       {1.2, 10.0 / 3.0, false, 100, 1e-10},
                       {1.8, 1.0, false, 100, 1e-10},
                       {1.8, 4.0 / 1.8, false, 100, 1e-10},
                       {1.2, 1.0, true, 50, 1e-13},
                       {1.2, 5.0, true, 50, 1e-13},
                       {1.8, 1.0, true, 50, 1e-13},
                       {1.8, 5.0, true, 50, 1e-15}};
        double worst_agree = 0.0;
        double worst_resid = 0.0;
        bool nonneg = true;
        for (const auto& c : configs) {
            GradedMesh mesh = build_mesh({c.alpha, c.r, 0.5, c.N});
            StiffnessMatrix A = assemble_stiffness(mesh, c.alpha);
            std::vector<double> F =
                sample_source(c.power ? SourceTerm::power(0.4) : SourceTerm::one(), c.alpha, mesh);
            DiscreteSolution direct = solve_direct(A, F);
            PrecondParams pp = precond_params(c.alpha, c.r, 0.5);
            DiagPreconditioner P = build_preconditioner(mesh, pp.lambda, pp.mu);
            JacobiOptions opts;
            opts.tol = c.tol;
            opts.max_iter = 3000000;
            DiscreteSolution iter = solve_preconditioned(A, F, P, opts);

            double scale = detail::max_abs(direct.values);
            double diff = 0.0;
            for (std::size_t k = 0; k < iter.values.size(); ++k)
                diff = std::max(diff, std::fabs(iter.values[k] - direct.values[k]));
            worst_agree = std::max(worst_agree, diff / scale);

            double f_norm = detail::max_abs(F);
            for (const DiscreteSolution* u : {&direct, &iter}) {
                std::vector<double> Au = apply_operator(A, u->values);
                double res = 0.0;
                for (std::size_t k = 0; k < Au.size(); ++k)
                    res = std::max(res, std::fabs(Au[k] - F[k]));
                worst_resid = std::max(worst_resid, res / f_norm);
                nonneg = nonneg && min_entry(u->values) >= 0.0;
            }
        }
        bool ok = worst_agree <= 1e-8 && worst_resid <= 1e-10 && nonneg;
        announce(7, "solver agreement, residuals, nonnegativity", ok,
                 fmt("max solver gap %.2e (gate 1e-8), max residual %.2e (gate 1e-10), "
                     "nonnegative %s",
                     worst_agree, worst_resid, nonneg ? "yes" : "no"));
    } catch (const std::exception& e) {
        announce(7, "solver agreement, residuals, nonnegativity", false,
                 fmt("exception: %s", e.what()));
    }
}

}  // namespace

int main() {
    check_table(1, 1, 180.0);
    check_table(2, 2, 240.0);

    try {
        SweepOutcome sw = run_sweep();
        announce(3, "sign pattern and row-sum lower bound",
                 sw.sign_violations == 0 && sw.bound_violations == 0,
                 fmt("%d meshes, %ld sign / %ld bound violations, min margin ratio %.4f",
                     sw.grids, sw.sign_violations, sw.bound_violations, sw.min_bound_ratio));
        announce(4, "column scaling restores strict dominance",
                 sw.b_sign_violations == 0 && sw.b_nonpositive == 0 &&
                     sw.b_bound_violations == 0 && sw.grids_with_nonpositive_scaled >= 1,
                 fmt("%ld sign / %ld nonpositive / %ld bound violations, min margin ratio "
                     "%.4f, distance-only scaling fails on %d meshes",
                     sw.b_sign_violations, sw.b_nonpositive, sw.b_bound_violations,
                     sw.min_b_bound_ratio, sw.grids_with_nonpositive_scaled));

        LargeOutcome lg = run_large();
        bool small_ok = sw.worst_plain <= 1e-10 && sw.worst_weighted <= 1e-10 &&
                        sw.worst_stiffness <= 1e-10;
        bool large_ok = lg.worst_plain <= 1e-8 && lg.worst_weighted <= 1e-8 &&
                        lg.worst_stiffness <= 1e-8;
        announce(5, "row-sum identities at both thresholds", small_ok && large_ok,
                 fmt("small meshes %.1e / %.1e / %.1e (gate 1e-10), large %.1e / %.1e / %.1e "
                     "(gate 1e-8)",
                     sw.worst_plain, sw.worst_weighted, sw.worst_stiffness, lg.worst_plain,
                     lg.worst_weighted, lg.worst_stiffness));
    } catch (const std::exception& e) {
        announce(3, "sign pattern and row-sum lower bound", false, fmt("exception: %s", e.what()));
        announce(4, "column scaling restores strict dominance", false, "skipped");
        announce(5, "row-sum identities at both thresholds", false, "skipped");
    }

    check_defect_scaling();
    check_solvers();

    if (g_failures > 0)
        std::printf("%d criterion(s) failed\n", g_failures);
    else
        std::printf("all criteria passed\n");
    return g_failures == 0 ? 0 : 1;
}
