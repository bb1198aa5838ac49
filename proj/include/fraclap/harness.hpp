#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "mesh.hpp"
#include "precond.hpp"
#include "problems.hpp"
#include "solve.hpp"

namespace fraclap {

/// How the error column of a convergence report was measured.
enum class ErrorMetric {
    exact_error,       ///< maximum nodal deviation from a closed-form solution
    self_convergence,  ///< maximum deviation between nested-mesh solutions
};

struct ReportRow {
    int N;
    double E;
    double rate;    ///< meaningful only when has_rate
    bool has_rate;  ///< absent on the first ladder row
};

/// Refinement study for one (problem, alpha, r) configuration.
struct ConvergenceReport {
    std::string problem;
    double alpha;
    double r;
    ErrorMetric metric;
    std::vector<ReportRow> rows;
};

/// Maximum nodal error against a closed-form solution, taken over all
/// nodes; the boundary nodes contribute zero on both sides.
inline double exact_error(const DiscreteSolution& sol, const std::vector<double>& exact) {
    if (exact.size() != sol.values.size())
        throw std::invalid_argument("exact_error: dimension mismatch");
    double e = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k)
        e = std::max(e, std::abs(exact[k] - sol.values[k]));
    return e;
}

/// Maximum deviation between a solution at resolution N/2 and one at
/// resolution N, compared at the coarse nodes, which coincide bit-exactly
/// with the even-indexed fine nodes.
inline double self_convergence_error(const DiscreteSolution& coarse, const DiscreteSolution& fine) {
    const ProblemParams& pc = coarse.mesh.params();
    const ProblemParams& pf = fine.mesh.params();
    if (pf.N != 2 * pc.N)
        throw std::invalid_argument("self_convergence_error: resolutions are not nested");
    if (pf.r != pc.r || pf.T != pc.T)
        throw std::invalid_argument("self_convergence_error: meshes differ in r or T");
    double e = 0.0;
    const int coarse_interior = coarse.mesh.n_interior();
    for (int i = 1; i <= coarse_interior; ++i) {
        double uc = coarse.values[static_cast<std::size_t>(i) - 1];
        double uf = fine.values[static_cast<std::size_t>(2 * i) - 1];
        e = std::max(e, std::abs(uc - uf));
    }
    return e;
}

/// Grading rule for a study column: either a fixed exponent or the
/// table-specific optimal formula (4/alpha for the constant source,
/// 2/sigma for the singular source).
struct RRule {
    bool is_auto;
    double value;  ///< used when !is_auto

    static RRule fixed(double v) { return RRule{false, v}; }
    static RRule automatic() { return RRule{true, 0.0}; }
};

struct StudyConfig {
    int table = 1;                     ///< 1 = constant source, 2 = singular source
    std::vector<double> alphas{1.2, 1.8};
    std::vector<RRule> r_rules{RRule::fixed(1.0), RRule::automatic()};
    double sigma = 0.4;                ///< singular-source exponent (table 2)
    std::vector<int> ladder{100, 200, 400, 800};
    enum class Solver { direct, precond } solver = Solver::direct;
    JacobiOptions jacobi{};            ///< used by the precond solver
    double T = 0.5;
    double a = 0.0;                    ///< left endpoint of the physical interval
};

namespace detail {

inline double resolve_r(const RRule& rule, int table, double alpha, double sigma) {
    if (!rule.is_auto)
        return rule.value;
    return table == 1 ? 4.0 / alpha : 2.0 / sigma;
}

inline DiscreteSolution solve_cell(const StudyConfig& cfg, double alpha, double r, int N) {
    GradedMesh mesh = build_mesh(ProblemParams{alpha, r, cfg.T, N});
    StiffnessMatrix A = assemble_stiffness(mesh, alpha);
    SourceTerm src = cfg.table == 1 ? SourceTerm::one(cfg.a, cfg.a + 2.0 * cfg.T)
                                    : SourceTerm::power(cfg.sigma, cfg.a, cfg.a + 2.0 * cfg.T);
    std::vector<double> F = sample_source(src, alpha, mesh);
    if (cfg.solver == StudyConfig::Solver::direct)
        return solve_direct(A, F);
    PrecondParams pp = precond_params(alpha, r, cfg.T);
    DiagPreconditioner P = build_preconditioner(mesh, pp.lambda, pp.mu);
    return solve_preconditioned(A, F, P, cfg.jacobi);
}

inline void validate_study_config(const StudyConfig& cfg) {
    if (cfg.table != 1 && cfg.table != 2)
        throw std::invalid_argument("run_study: table must be 1 or 2");
    if (cfg.alphas.empty() || cfg.r_rules.empty() || cfg.ladder.empty())
        throw std::invalid_argument("run_study: empty alpha list, r list, or ladder");
    for (std::size_t k = 1; k < cfg.ladder.size(); ++k)
        if (cfg.ladder[k] != 2 * cfg.ladder[k - 1])
            throw std::invalid_argument("run_study: ladder resolutions must double");
    for (int N : cfg.ladder) {
        if (N < 2 || N % 2 != 0)
            throw std::invalid_argument("run_study: ladder resolutions must be even and >= 2");
    }
    if (cfg.table == 2 && cfg.ladder.front() / 2 < 2)
        throw std::invalid_argument("run_study: table 2 needs ladder starting at N >= 4");
}

}  // namespace detail

/// Runs a refinement study and returns one report per (alpha, r) cell,
/// sorted by (alpha, r). Table 1 measures the error against the closed
/// form; table 2 measures self-convergence between nested resolutions,
/// which adds a solve at half the smallest ladder entry.
inline std::vector<ConvergenceReport> run_study(const StudyConfig& cfg) {
    detail::validate_study_config(cfg);
    std::vector<ConvergenceReport> reports;
    char label[64];
    if (cfg.table == 2)
        std::snprintf(label, sizeof label, "power:%g", cfg.sigma);
    else
        std::snprintf(label, sizeof label, "one");

    struct CellKey {
        double alpha;
        double r;
    };
    std::vector<CellKey> cells;
    for (double alpha : cfg.alphas)
        for (const RRule& rule : cfg.r_rules)
            cells.push_back(CellKey{alpha, detail::resolve_r(rule, cfg.table, alpha, cfg.sigma)});
    std::sort(cells.begin(), cells.end(), [](const CellKey& a, const CellKey& b) {
        if (a.alpha != b.alpha)
            return a.alpha < b.alpha;
        return a.r < b.r;
    });

    for (const CellKey& cell : cells) {
        ConvergenceReport rep;
        rep.problem = label;
        rep.alpha = cell.alpha;
        rep.r = cell.r;
        rep.metric = cfg.table == 1 ? ErrorMetric::exact_error : ErrorMetric::self_convergence;

        std::vector<double> errors;
        if (cfg.table == 1) {
            ExactSolution exact = ExactSolution::getoor(cfg.a, cfg.a + 2.0 * cfg.T);
            for (int N : cfg.ladder) {
                DiscreteSolution sol = detail::solve_cell(cfg, cell.alpha, cell.r, N);
                errors.push_back(exact_error(sol, exact_nodal(exact, cell.alpha, sol.mesh)));
            }
        } else {
            std::map<int, DiscreteSolution> cache;
            auto solution_at = [&](int N) -> const DiscreteSolution& {
                auto it = cache.find(N);
                if (it == cache.end())
                    it = cache.emplace(N, detail::solve_cell(cfg, cell.alpha, cell.r, N)).first;
                return it->second;
            };
            for (int N : cfg.ladder)
                errors.push_back(self_convergence_error(solution_at(N / 2), solution_at(N)));
        }
        for (std::size_t k = 0; k < cfg.ladder.size(); ++k) {
            ReportRow row;
            row.N = cfg.ladder[k];
            row.E = errors[k];
            row.has_rate = k > 0;
            row.rate = k > 0 ? std::log2(errors[k - 1] / errors[k]) : 0.0;
            rep.rows.push_back(row);
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

namespace detail {

inline std::string format_sig6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

/// CSV serialization: header problem,alpha,r,N,E,rate with 6 significant
/// digits and an empty rate on each first ladder row.
inline std::string to_csv(const std::vector<ConvergenceReport>& reports) {
    std::ostringstream os;
    os << "problem,alpha,r,N,E,rate\n";
    for (const ConvergenceReport& rep : reports)
        for (const ReportRow& row : rep.rows) {
            os << rep.problem << ',' << detail::format_sig6(rep.alpha) << ','
               << detail::format_sig6(rep.r) << ',' << row.N << ',' << detail::format_sig6(row.E)
               << ',';
            if (row.has_rate)
                os << detail::format_sig6(row.rate);
            os << '\n';
        }
    return os.str();
}

/// Human-oriented aligned table.
inline std::string to_markdown(const std::vector<ConvergenceReport>& reports) {
    const char* headers[6] = {"problem", "alpha", "r", "N", "E", "rate"};
    std::vector<std::array<std::string, 6>> body;
    for (const ConvergenceReport& rep : reports)
        for (const ReportRow& row : rep.rows)
            body.push_back({rep.problem, detail::format_sig6(rep.alpha),
                            detail::format_sig6(rep.r), std::to_string(row.N),
                            detail::format_sig6(row.E),
                            row.has_rate ? detail::format_sig6(row.rate) : std::string()});
    std::size_t width[6];
    for (int c = 0; c < 6; ++c) {
        width[c] = std::string(headers[c]).size();
        for (const auto& row : body)
            width[c] = std::max(width[c], row[static_cast<std::size_t>(c)].size());
    }
    std::ostringstream os;
    auto emit_row = [&](const std::array<std::string, 6>& cells) {
        os << '|';
        for (int c = 0; c < 6; ++c) {
            os << ' ' << cells[static_cast<std::size_t>(c)];
            os << std::string(width[c] - cells[static_cast<std::size_t>(c)].size(), ' ') << " |";
        }
        os << '\n';
    };
    emit_row({headers[0], headers[1], headers[2], headers[3], headers[4], headers[5]});
    os << '|';
    for (int c = 0; c < 6; ++c)
        os << std::string(width[c] + 2, '-') << '|';
    os << '\n';
    for (const auto& row : body)
        emit_row(row);
    return os.str();
}

/// One expected study cell used by check mode.
struct BaselineCell {
    double alpha;
    bool r_auto;  ///< false means the fixed column r = 1
    int N;
    double E;
    double rate;
    bool has_rate;
};

/// Expected results of the standard constant-source study
/// (alpha in {1.2, 1.8}, r in {1, 4/alpha}, N in {100, 200, 400, 800}).
inline const std::vector<BaselineCell>& baseline_table1() {
    static const std::vector<BaselineCell> cells = {
        {1.2, false, 100, 1.1269e-3, 0.0, false},  {1.2, false, 200, 7.4281e-4, 0.6013, true},
        {1.2, false, 400, 4.8986e-4, 0.6006, true}, {1.2, false, 800, 3.2311e-4, 0.6003, true},
        {1.8, false, 100, 2.7320e-5, 0.0, false},  {1.8, false, 200, 1.4829e-5, 0.8815, true},
        {1.8, false, 400, 7.9970e-6, 0.8909, true}, {1.8, false, 800, 4.2989e-6, 0.8955, true},
        {1.2, true, 100, 4.1583e-5, 0.0, false},   {1.2, true, 200, 1.0628e-5, 1.9682, true},
        {1.2, true, 400, 2.6919e-6, 1.9811, true},  {1.2, true, 800, 6.7824e-7, 1.9888, true},
        {1.8, true, 100, 7.6424e-6, 0.0, false},   {1.8, true, 200, 2.0649e-6, 1.8880, true},
        {1.8, true, 400, 5.5008e-7, 1.9083, true},  {1.8, true, 800, 1.4495e-7, 1.9240, true},
    };
    return cells;
}

/// Expected results of the standard singular-source study
/// (sigma = 0.4, r in {1, 2/sigma}, N in {100, 200, 400, 800}).
inline const std::vector<BaselineCell>& baseline_table2() {
    static const std::vector<BaselineCell> cells = {
        {1.2, false, 100, 2.9193e-2, 0.0, false},  {1.2, false, 200, 2.2619e-2, 0.3681, true},
        {1.2, false, 400, 1.7435e-2, 0.3755, true}, {1.2, false, 800, 1.3395e-2, 0.3804, true},
        {1.8, false, 100, 5.6776e-2, 0.0, false},  {1.8, false, 200, 4.3468e-2, 0.3853, true},
        {1.8, false, 400, 3.3112e-2, 0.3926, true}, {1.8, false, 800, 2.5161e-2, 0.3962, true},
        {1.2, true, 100, 2.7820e-3, 0.0, false},   {1.2, true, 200, 6.9631e-4, 1.9983, true},
        {1.2, true, 400, 1.7418e-4, 1.9992, true},  {1.2, true, 800, 4.3557e-5, 1.9996, true},
        {1.8, true, 100, 5.0311e-3, 0.0, false},   {1.8, true, 200, 1.3190e-3, 1.9315, true},
        {1.8, true, 400, 3.4157e-4, 1.9492, true},  {1.8, true, 800, 8.7691e-5, 1.9617, true},
    };
    return cells;
}

/// Tolerances for check mode: the error column is compared relatively, the
/// rate column absolutely.
struct CheckTolerances {
    double e_rel;
    double rate_abs;
};

inline CheckTolerances check_tolerances(int table) {
    return table == 1 ? CheckTolerances{0.01, 0.02} : CheckTolerances{0.02, 0.03};
}

/// Compares a computed study against the expected baseline. Returns a
/// list of human-readable failure messages; empty means every baseline
/// cell was found and matched within tolerance and no extra cells were
/// produced.
inline std::vector<std::string> check_against_baseline(
    const std::vector<ConvergenceReport>& reports, int table, double sigma) {
    const std::vector<BaselineCell>& cells = table == 1 ? baseline_table1() : baseline_table2();
    const CheckTolerances tol = check_tolerances(table);
    std::vector<std::string> failures;
    char msg[256];

    auto describe = [&](double alpha, double r, int N) {
        static char buf[96];
        std::snprintf(buf, sizeof buf, "alpha=%g r=%g N=%d", alpha, r, N);
        return std::string(buf);
    };

    std::vector<const BaselineCell*> matched;
    for (const ConvergenceReport& rep : reports) {
        for (const ReportRow& row : rep.rows) {
            const BaselineCell* found = nullptr;
            for (const BaselineCell& cell : cells) {
                double expected_r =
                    cell.r_auto ? (table == 1 ? 4.0 / cell.alpha : 2.0 / sigma) : 1.0;
                if (cell.N == row.N && std::abs(cell.alpha - rep.alpha) < 1e-9 &&
                    std::abs(expected_r - rep.r) < 1e-9) {
                    found = &cell;
                    break;
                }
            }
            if (!found) {
                failures.push_back("no baseline for computed cell " +
                                   describe(rep.alpha, rep.r, row.N));
                continue;
            }
            matched.push_back(found);
            double e_rel = std::abs(row.E - found->E) / found->E;
            if (!(e_rel <= tol.e_rel)) {
                std::snprintf(msg, sizeof msg, "E mismatch at %s: computed %.6g expected %.6g (%.2f%% off)",
                              describe(rep.alpha, rep.r, row.N).c_str(), row.E, found->E,
                              100.0 * e_rel);
                failures.push_back(msg);
            }
            if (found->has_rate != row.has_rate) {
                failures.push_back("rate presence mismatch at " +
                                   describe(rep.alpha, rep.r, row.N));
            } else if (found->has_rate && !(std::abs(found->rate - row.rate) <= tol.rate_abs)) {
                std::snprintf(msg, sizeof msg, "rate mismatch at %s: computed %.4f expected %.4f",
                              describe(rep.alpha, rep.r, row.N).c_str(), row.rate, found->rate);
                failures.push_back(msg);
            }
        }
    }
    if (matched.size() < cells.size())
        failures.push_back("incomplete study: " + std::to_string(matched.size()) + " of " +
                           std::to_string(cells.size()) +
                           " baseline cells covered (run the default configuration)");
    return failures;
}

}  // namespace fraclap
