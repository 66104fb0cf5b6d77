#include "trigroup/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace trigroup {

double SymmetricMatrix::max_abs_entry() const noexcept {
    double best = 0.0;
    for (double x : packed_) best = std::max(best, std::abs(x));
    return best;
}

double SymmetricMatrix::trace() const noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < order_; ++i) sum += (*this)(i, i);
    return sum;
}

std::vector<double> SymmetricMatrix::multiply(std::span<const double> x) const {
    if (x.size() != order_) throw std::invalid_argument("SymmetricMatrix::multiply: size mismatch");
    std::vector<double> y(order_, 0.0);
    for (std::size_t i = 0; i < order_; ++i) {
        const double* row = packed_.data() + i * (i + 1) / 2;
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            acc += row[j] * x[j];
            y[j] += row[j] * x[i];
        }
        y[i] += acc + row[i] * x[i];
    }
    return y;
}

namespace {

// Dense row-major work matrix; column k of `v` ends up as eigenvector k.
struct Work {
    std::size_t n;
    std::vector<double> v;
    std::vector<double> d;
    std::vector<double> e;

    double& at(std::size_t i, std::size_t j) { return v[i * n + j]; }
};

// Householder reduction to symmetric tridiagonal form (EISPACK tred2
// lineage). On return d holds the diagonal, e[1..n-1] the subdiagonal and
// v the accumulated orthogonal transformation.
void tridiagonalize(Work& w) {
    const std::size_t n = w.n;
    auto& d = w.d;
    auto& e = w.e;
    for (std::size_t j = 0; j < n; ++j) d[j] = w.at(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = w.at(i - 1, j);
                w.at(i, j) = 0.0;
                w.at(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                w.at(j, i) = f;
                g = e[j] + w.at(j, j) * f;
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += w.at(k, j) * d[k];
                    e[k] += w.at(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k < i; ++k) w.at(k, j) -= (f * e[k] + g * d[k]);
                d[j] = w.at(i - 1, j);
                w.at(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        w.at(n - 1, i) = w.at(i, i);
        w.at(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = w.at(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += w.at(k, i + 1) * w.at(k, j);
                for (std::size_t k = 0; k <= i; ++k) w.at(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) w.at(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = w.at(n - 1, j);
        w.at(n - 1, j) = 0.0;
    }
    w.at(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e). Rotations are applied to v
// only when vectors are wanted.
void tridiagonal_ql(Work& w, bool vectors, int max_iterations) {
    const std::size_t n = w.n;
    auto& d = w.d;
    auto& e = w.e;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n && std::abs(e[m]) > eps * tst1) ++m;
        if (m == n) m = n - 1;

        if (m > l) {
            int iteration = 0;
            do {
                if (++iteration > max_iterations) {
                    throw SolverError(fmt::format(
                        "eigenvalue {} did not converge within {} QL iterations", l, max_iterations));
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (vectors) {
                        for (std::size_t k = 0; k < n; ++k) {
                            const double vk1 = w.at(k, i + 1);
                            w.at(k, i + 1) = s * w.at(k, i) + c * vk1;
                            w.at(k, i) = c * w.at(k, i) - s * vk1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

Eigendecomposition sym_eigs(const SymmetricMatrix& matrix, const EigenOptions& options) {
    const std::size_t n = matrix.order();
    if (n == 0) throw std::invalid_argument("sym_eigs: empty matrix");
    if (!(options.tol > 0.0)) throw std::invalid_argument("sym_eigs: tol must be positive");

    Eigendecomposition out;
    out.norm = matrix.max_abs_entry();

    Work w{n, std::vector<double>(n * n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w.at(i, j) = matrix(i, j);
    }
    tridiagonalize(w);
    tridiagonal_ql(w, options.want_vectors, options.max_iterations);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return w.d[a] < w.d[b]; });
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = w.d[order[k]];

    const double sum = std::accumulate(out.values.begin(), out.values.end(), 0.0);
    out.trace_error = std::abs(sum - matrix.trace());
    if (!(out.trace_error <= static_cast<double>(n) * options.tol * out.norm)) {
        throw SolverError(fmt::format("trace identity violated: error {:.3e}", out.trace_error));
    }

    if (!options.want_vectors) {
        out.max_residual = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) out.vectors[k * n + i] = w.at(i, order[k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto v = out.vector(k);
        const auto mv = matrix.multiply(v);
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = mv[i] - out.values[k] * v[i];
            r2 += r * r;
        }
        out.max_residual = std::max(out.max_residual, std::sqrt(r2));
    }
    if (!(out.max_residual <= options.tol * out.norm) && out.norm > 0.0) {
        throw SolverError(fmt::format("eigenpair residual {:.3e} exceeds {:.3e}", out.max_residual,
                                      options.tol * out.norm));
    }
    return out;
}

SymmetricMatrix normalized_laplacian(const Multigraph& graph) {
    const std::uint32_t m = graph.vertex_count();
    SymmetricMatrix lap(m);
    const auto& deg = graph.degrees();
    for (Vertex v = 0; v < m; ++v) {
        if (deg[v] > 0) lap.set(v, v, 1.0);
    }
    for (const auto& [e, mult] : graph.edges()) {
        const double dv = static_cast<double>(deg[e.first]);
        const double dw = static_cast<double>(deg[e.second]);
        lap.set(e.first, e.second, -static_cast<double>(mult) / std::sqrt(dv * dw));
    }
    return lap;
}

SpectralReport spectral_gap(const Multigraph& graph, const GapOptions& options) {
    if (graph.vertex_count() == 0) throw std::invalid_argument("spectral_gap: graph has no vertices");
    EigenOptions eo;
    eo.tol = options.tol;
    eo.want_vectors = options.verify_residuals;
    auto eig = sym_eigs(normalized_laplacian(graph), eo);

    SpectralReport report;
    report.eigenvalues = std::move(eig.values);
    report.lambda2 = report.eigenvalues.size() >= 2 ? report.eigenvalues[1]
                                                     : std::numeric_limits<double>::quiet_NaN();
    report.residual = eig.max_residual;
    report.trace_error = eig.trace_error;
    report.connected = is_connected(graph);
    return report;
}

ZukResult zuk_certificate(const Multigraph& link_graph, double margin, const GapOptions& options) {
    const auto report = spectral_gap(link_graph, options);
    ZukResult out;
    out.connected = report.connected;
    out.lambda2 = report.lambda2;
    out.certified = out.connected && out.lambda2 > 0.5 + margin;
    return out;
}

ZukResult zuk_certificate(const Presentation& presentation, double margin, const GapOptions& options) {
    return zuk_certificate(build_link_graph(presentation), margin, options);
}

PerturbationCheck check_perturbation_inequality(const Multigraph& g, const Multigraph& h,
                                                double eps, double d, double tol) {
    if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("perturbation: eps must lie in (0, 1)");
    if (g.vertex_count() != h.vertex_count()) {
        throw PreconditionError("perturbation: G and H must share the vertex set");
    }
    if (!(d > 0.0)) throw PreconditionError("perturbation: d must be positive");
    if (!is_connected(g)) throw PreconditionError("perturbation: G is not connected");
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const double dg = static_cast<double>(g.degree(v));
        if (std::abs(dg - d) > eps * d) {
            throw PreconditionError(fmt::format(
                "perturbation: vertex {} has G-degree {} outside {} +- {}", v, dg, d, eps * d));
        }
        if (static_cast<double>(h.degree(v)) > eps * d) {
            throw PreconditionError(fmt::format("perturbation: vertex {} has H-degree {} above {}",
                                                v, h.degree(v), eps * d));
        }
    }
    const GapOptions options{tol, false};
    PerturbationCheck out;
    out.lhs = spectral_gap(merge(g, h), options).lambda2;
    out.rhs = spectral_gap(g, options).lambda2 - eps / (1.0 - eps);
    out.slack = out.lhs - out.rhs;
    out.holds = out.slack >= -tol;
    return out;
}

PerturbationCheck check_perturbation_at_mean_degree(const Multigraph& g, const Multigraph& h,
                                                    double eps, double tol) {
    if (g.vertex_count() == 0) throw PreconditionError("perturbation: G has no vertices");
    return check_perturbation_inequality(g, h, eps, degree_concentration(g).mean_degree, tol);
}

CombinationCheck check_combination_inequality(const Multigraph& l1, const Multigraph& l2,
                                              const Multigraph& l3, double tol) {
    const std::array<const Multigraph*, 3> parts{&l1, &l2, &l3};
    for (std::size_t i = 0; i < 3; ++i) {
        if (parts[i]->vertex_count() != l1.vertex_count()) {
            throw PreconditionError("combination: parts must share the vertex set");
        }
        if (parts[i]->vertex_count() < 2 || parts[i]->min_degree() == 0) {
            throw PreconditionError(fmt::format("combination: part {} has an isolated vertex", i + 1));
        }
    }
    const GapOptions options{tol, false};
    CombinationCheck out;
    for (std::size_t i = 0; i < 3; ++i) {
        out.terms[i] = 1.0 - spectral_gap(*parts[i], options).lambda2;
    }
    out.rhs = out.terms[0] + out.terms[1] + out.terms[2];
    out.lhs = 1.0 - spectral_gap(merge(merge(l1, l2), l3), options).lambda2;
    out.holds = out.lhs <= out.rhs + tol;
    return out;
}

std::string spectrum_csv(const SpectralReport& report, double tol) {
    std::string out = fmt::format("# m={} tol={:g} residual={:.6e}\nindex,eigenvalue\n",
                                  report.eigenvalues.size(), tol, report.residual);
    for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
        out += fmt::format("{},{:.17g}\n", i, report.eigenvalues[i]);
    }
    return out;
}

}  // namespace trigroup
