#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "trigroup/linkgraph.hpp"
#include "trigroup/words.hpp"

namespace trigroup {

/// Real symmetric matrix stored as its packed lower triangle, so
/// symmetry holds by construction.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t order) : order_(order), packed_(order * (order + 1) / 2, 0.0) {}

    std::size_t order() const noexcept { return order_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return packed_[slot(i, j)]; }
    void set(std::size_t i, std::size_t j, double value) noexcept { packed_[slot(i, j)] = value; }

    double max_abs_entry() const noexcept;
    double trace() const noexcept;
    std::vector<double> multiply(std::span<const double> x) const;

private:
    static constexpr std::size_t slot(std::size_t i, std::size_t j) noexcept {
        return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
    }

    std::size_t order_;
    std::vector<double> packed_;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EigenOptions {
    /// Accuracy target relative to the largest absolute entry of the matrix.
    double tol = 1e-10;
    bool want_vectors = false;
    /// QL sweeps allowed per eigenvalue before giving up.
    int max_iterations = 60;
};

struct Eigendecomposition {
    std::vector<double> values;   ///< ascending
    std::vector<double> vectors;  ///< row k holds the unit eigenvector of values[k]; empty unless requested
    double norm = 0.0;            ///< largest absolute entry of the input
    double max_residual = 0.0;    ///< max_k ||M v_k - values[k] v_k||_2; NaN without vectors
    double trace_error = 0.0;     ///< |sum(values) - trace(M)|

    std::span<const double> vector(std::size_t k) const {
        const std::size_t m = values.size();
        return {vectors.data() + k * m, m};
    }
};

/// Full spectrum of a dense symmetric matrix: Householder reduction to
/// tridiagonal form, then implicit-shift QL. Throws SolverError when an
/// eigenvalue fails to converge or when the computed spectrum misses the
/// residual (tol * norm) or trace (m * tol * norm) bounds.
Eigendecomposition sym_eigs(const SymmetricMatrix& matrix, const EigenOptions& options = {});

/// Entries: 1 on the diagonal of non-isolated vertices, -a_vw / sqrt(d_v d_w)
/// for adjacent v, w, 0 elsewhere (isolated rows and columns vanish).
SymmetricMatrix normalized_laplacian(const Multigraph& graph);

struct SpectralReport {
    std::vector<double> eigenvalues;  ///< ascending
    double lambda2 = 0.0;             ///< NaN when the graph has fewer than two vertices
    double residual = 0.0;            ///< achieved eigenpair residual; NaN if vectors were skipped
    double trace_error = 0.0;
    bool connected = false;
};

struct GapOptions {
    double tol = 1e-10;
    bool verify_residuals = true;
};

SpectralReport spectral_gap(const Multigraph& graph, const GapOptions& options = {});

/// Margin required above 1/2 before a spectral gap certifies property (T).
inline constexpr double kCertificateMargin = 1e-8;

struct ZukResult {
    bool certified = false;
    bool connected = false;
    double lambda2 = 0.0;
};

/// Certifies iff the link graph is connected and lambda2 > 1/2 + margin.
/// A non-certificate is inconclusive.
ZukResult zuk_certificate(const Presentation& presentation, double margin = kCertificateMargin,
                          const GapOptions& options = {});
ZukResult zuk_certificate(const Multigraph& link_graph, double margin = kCertificateMargin,
                          const GapOptions& options = {});

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PerturbationCheck {
    bool holds = false;
    double lhs = 0.0;    ///< lambda2(G ∪ H)
    double rhs = 0.0;    ///< lambda2(G) - eps / (1 - eps)
    double slack = 0.0;  ///< lhs - rhs
};

/// Evaluates lambda2(G ∪ H) >= lambda2(G) - eps/(1-eps) for G connected with
/// |d_G(v) - d| <= eps d and d_H(v) <= eps d at every vertex. Violated
/// hypotheses throw PreconditionError. The inequality counts as holding
/// within `tol`.
PerturbationCheck check_perturbation_inequality(const Multigraph& g, const Multigraph& h,
                                                double eps, double d, double tol = 1e-10);
/// Same, with d taken as the mean degree of G.
PerturbationCheck check_perturbation_at_mean_degree(const Multigraph& g, const Multigraph& h,
                                                    double eps, double tol = 1e-10);

struct CombinationCheck {
    bool holds = false;
    double lhs = 0.0;                  ///< 1 - lambda2(L1 ∪ L2 ∪ L3)
    std::array<double, 3> terms{};     ///< 1 - lambda2(Li)
    double rhs = 0.0;                  ///< sum of terms
};

/// Evaluates 1 - lambda2(L1 ∪ L2 ∪ L3) <= sum_i (1 - lambda2(Li)), i.e. the
/// second-largest eigenvalue of D^-1/2 A D^-1/2 is subadditive over the
/// parts. Every part needs minimum degree >= 1 (else PreconditionError).
CombinationCheck check_combination_inequality(const Multigraph& l1, const Multigraph& l2,
                                              const Multigraph& l3, double tol = 1e-10);

/// `# m=<m> tol=<tol> residual=<r>` then `index,eigenvalue` rows.
std::string spectrum_csv(const SpectralReport& report, double tol);

}  // namespace trigroup
