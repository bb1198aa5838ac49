#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclap {

/// Parameters of a symmetric graded mesh on the interval (0, 2T).
///
/// The mesh has 2N cells whose nodes cluster toward both endpoints with
/// strength controlled by the grading exponent r (r = 1 is uniform).
struct ProblemParams {
    double alpha;  ///< fractional order, in (1, 2)
    double r;      ///< grading exponent, >= 1
    double T;      ///< half-width; the domain is (0, 2T)
    int N;         ///< half the cell count; the mesh has nodes x_0..x_{2N}
};

/// Symmetric graded mesh with nodes x_j = T (j/N)^r for j <= N and the
/// mirror image x_j = 2T - x_{2N-j} for j > N.
///
/// Invariants: x_0 = 0, x_N = T, x_{2N} = 2T, strictly increasing nodes,
/// and bit-exact mirror symmetry x_j + x_{2N-j} = 2T (the upper half is
/// constructed by subtraction, not by re-evaluating the power formula).
class GradedMesh {
public:
    GradedMesh(ProblemParams params, std::vector<double> nodes)
        : params_(params), nodes_(std::move(nodes)), h_(1.0 / params.N) {}

    const ProblemParams& params() const { return params_; }

    /// Number of nodes minus one; node indices run over 0..two_n().
    int two_n() const { return 2 * params_.N; }

    /// Dimension of the interior collocation system (2N - 1).
    int n_interior() const { return 2 * params_.N - 1; }

    /// Mesh parameter h = 1/N used in all rate statements.
    double h() const { return h_; }

    const std::vector<double>& nodes() const { return nodes_; }

    /// Node x_j, 0 <= j <= 2N.
    double x(int j) const {
        check_node_index(j);
        return nodes_[static_cast<std::size_t>(j)];
    }

    /// Cell width h_j = x_j - x_{j-1}, 1 <= j <= 2N.
    double width(int j) const {
        if (j < 1 || j > two_n())
            throw std::out_of_range("GradedMesh::width: cell index " + std::to_string(j) +
                                    " outside [1, " + std::to_string(two_n()) + "]");
        return nodes_[static_cast<std::size_t>(j)] - nodes_[static_cast<std::size_t>(j) - 1];
    }

    /// Distance from node x_j to the boundary of (0, 2T): min{x_j, 2T - x_j}.
    double boundary_distance(int j) const {
        check_node_index(j);
        double xj = nodes_[static_cast<std::size_t>(j)];
        return std::min(xj, 2.0 * params_.T - xj);
    }

private:
    void check_node_index(int j) const {
        if (j < 0 || j > two_n())
            throw std::out_of_range("GradedMesh: node index " + std::to_string(j) +
                                    " outside [0, " + std::to_string(two_n()) + "]");
    }

    ProblemParams params_;
    std::vector<double> nodes_;
    double h_;
};

/// Validates mesh parameters. N odd is accepted (a standalone solve allows
/// any N >= 2); refinement ladders impose evenness separately.
inline void validate_params(const ProblemParams& p) {
    if (!(p.alpha > 1.0 && p.alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (1, 2), got " + std::to_string(p.alpha));
    if (!(p.r >= 1.0))
        throw std::invalid_argument("grading exponent r must be >= 1, got " + std::to_string(p.r));
    if (!(p.T > 0.0))
        throw std::invalid_argument("half-width T must be positive, got " + std::to_string(p.T));
    if (p.N < 2)
        throw std::invalid_argument("N must be at least 2, got " + std::to_string(p.N));
}

/// Builds the symmetric graded mesh for the given parameters.
///
/// The power (j/N)^r is evaluated as exp(r log(j/N)) for j >= 1 and as
/// exactly 0 for j = 0; the upper half is mirrored so that
/// x_j + x_{2N-j} == 2T holds as an equality of doubles.
inline GradedMesh build_mesh(const ProblemParams& params) {
    validate_params(params);
    const int N = params.N;
    const double T = params.T;
    std::vector<double> nodes(static_cast<std::size_t>(2 * N) + 1);
    nodes[0] = 0.0;
    for (int j = 1; j <= N; ++j) {
        double t = static_cast<double>(j) / static_cast<double>(N);
        nodes[static_cast<std::size_t>(j)] = T * std::exp(params.r * std::log(t));
    }
    for (int j = 0; j < N; ++j)
        nodes[static_cast<std::size_t>(2 * N - j)] = 2.0 * T - nodes[static_cast<std::size_t>(j)];
    for (int j = 1; j <= 2 * N; ++j)
        if (!(nodes[static_cast<std::size_t>(j)] > nodes[static_cast<std::size_t>(j) - 1]))
            throw std::runtime_error("build_mesh: nodes not strictly increasing at j = " +
                                     std::to_string(j));
    return GradedMesh(params, std::move(nodes));
}

/// Scale factors relating cell widths to the boundary distance, plus the
/// adjacent-width ratio, scanned over interior cells. The scaled width
/// h_j / (h delta(x_j)^{1-1/r}) stays in a fixed bracket as N grows and the
/// adjacent ratio is bounded by 2^r.
struct WidthRatioDiagnostics {
    double min_scaled_width;
    double max_scaled_width;
    double min_adjacent_ratio;
    double max_adjacent_ratio;
};

inline WidthRatioDiagnostics width_ratio_diagnostics(const GradedMesh& mesh) {
    const int two_n = mesh.two_n();
    const double h = mesh.h();
    const double expo = 1.0 - 1.0 / mesh.params().r;
    WidthRatioDiagnostics d{};
    bool first = true;
    for (int j = 1; j < two_n; ++j) {
        double scaled = mesh.width(j) / (h * std::pow(mesh.boundary_distance(j), expo));
        double adjacent = mesh.width(j + 1) / mesh.width(j);
        if (first) {
            d.min_scaled_width = d.max_scaled_width = scaled;
            d.min_adjacent_ratio = d.max_adjacent_ratio = adjacent;
            first = false;
        } else {
            d.min_scaled_width = std::min(d.min_scaled_width, scaled);
            d.max_scaled_width = std::max(d.max_scaled_width, scaled);
            d.min_adjacent_ratio = std::min(d.min_adjacent_ratio, adjacent);
            d.max_adjacent_ratio = std::max(d.max_adjacent_ratio, adjacent);
        }
    }
    return d;
}

}  // namespace fraclap
