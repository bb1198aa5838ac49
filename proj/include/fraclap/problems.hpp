#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "mesh.hpp"
#include "special.hpp"

namespace fraclap {

/// Right-hand side of the model problem on an interval (a, b).
/// constant_one is f = 1; singular_power is f(x) = (x - a)^{sigma - alpha},
/// which blows up at the left endpoint but stays finite at every interior
/// collocation node.
struct SourceTerm {
    enum class Kind { constant_one, singular_power };
    Kind kind;
    double sigma;  ///< only meaningful for singular_power
    double a;
    double b;

    static SourceTerm one(double a = 0.0, double b = 1.0) {
        return SourceTerm{Kind::constant_one, 0.0, a, b};
    }
    static SourceTerm power(double sigma, double a = 0.0, double b = 1.0) {
        return SourceTerm{Kind::singular_power, sigma, a, b};
    }
};

/// Reference solution selector. getoor is the closed form for the
/// constant-one source; none means no closed form is available.
struct ExactSolution {
    enum class Kind { getoor, none };
    Kind kind;
    double a;
    double b;

    static ExactSolution getoor(double a = 0.0, double b = 1.0) {
        return ExactSolution{Kind::getoor, a, b};
    }
    static ExactSolution none() { return ExactSolution{Kind::none, 0.0, 0.0}; }
};

namespace detail {

inline void check_interval_matches_mesh(double a, double b, const GradedMesh& mesh,
                                        const char* who) {
    double span = b - a;
    double expected = 2.0 * mesh.params().T;
    if (!(span > 0.0) || std::abs(span - expected) > 1e-12 * expected)
        throw std::invalid_argument(std::string(who) +
                                    ": interval length does not match the mesh domain (0, 2T)");
}

}  // namespace detail

/// Samples the source at the interior nodes x_1..x_{2N-1}. The singular
/// power source requires sigma in (0, alpha/2]; its values can be huge near
/// the boundary of a strongly graded mesh but are always finite.
inline std::vector<double> sample_source(const SourceTerm& src, double alpha,
                                         const GradedMesh& mesh) {
    detail::check_interval_matches_mesh(src.a, src.b, mesh, "sample_source");
    const int n = mesh.n_interior();
    std::vector<double> F(static_cast<std::size_t>(n));
    if (src.kind == SourceTerm::Kind::constant_one) {
        for (int j = 1; j <= n; ++j)
            F[static_cast<std::size_t>(j) - 1] = 1.0;
        return F;
    }
    if (!(src.sigma > 0.0 && src.sigma <= alpha / 2.0))
        throw std::invalid_argument("sample_source: singular power requires sigma in (0, alpha/2]");
    const double expo = src.sigma - alpha;
    for (int j = 1; j <= n; ++j) {
        double xj = mesh.x(j);  // distance from the left endpoint
        if (!(xj > 0.0))
            throw std::runtime_error("sample_source: source evaluated at the singular point");
        double f = std::pow(xj, expo);
        if (!std::isfinite(f))
            throw std::runtime_error("sample_source: non-finite source value at node " +
                                     std::to_string(j));
        F[static_cast<std::size_t>(j) - 1] = f;
    }
    return F;
}

/// Closed-form solution sampled at the interior nodes.
inline std::vector<double> exact_nodal(const ExactSolution& sol, double alpha,
                                       const GradedMesh& mesh) {
    if (sol.kind != ExactSolution::Kind::getoor)
        throw std::invalid_argument("exact_nodal: no closed-form solution configured");
    detail::check_interval_matches_mesh(sol.a, sol.b, mesh, "exact_nodal");
    const int n = mesh.n_interior();
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        u[static_cast<std::size_t>(j) - 1] = getoor_solution(alpha, sol.a, sol.b, sol.a + mesh.x(j));
    return u;
}

/// Nodal consistency defect tau = A u_exact - F of the scheme against a
/// given nodal solution. Entry i collocates at x_{i+1}.
inline std::vector<double> truncation_error(const StiffnessMatrix& A,
                                            const std::vector<double>& exact_values,
                                            const std::vector<double>& F) {
    if (exact_values.size() != F.size())
        throw std::invalid_argument("truncation_error: dimension mismatch");
    std::vector<double> tau = apply_operator(A, exact_values);
    for (std::size_t k = 0; k < tau.size(); ++k)
        tau[k] -= F[k];
    return tau;
}

}  // namespace fraclap
