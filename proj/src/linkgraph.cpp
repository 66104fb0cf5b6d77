#include "trigroup/linkgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "trigroup/disjoint_set.hpp"

namespace trigroup {

namespace {

Multigraph::Edge ordered(Vertex u, Vertex w) { return u < w ? Multigraph::Edge{u, w} : Multigraph::Edge{w, u}; }

std::array<Multigraph::Edge, 3> relation_edges(const Word& w) {
    const Letter a = w[0], b = w[1], c = w[2];
    return {ordered(a.position(), b.inverse().position()),
            ordered(b.position(), c.inverse().position()),
            ordered(c.position(), a.inverse().position())};
}

}  // namespace

void Multigraph::add_edge(Vertex u, Vertex w, std::uint64_t multiplicity) {
    if (u >= vertex_count() || w >= vertex_count()) {
        throw std::invalid_argument(fmt::format("edge {{{}, {}}} outside {} vertices", u, w,
                                                vertex_count()));
    }
    if (u == w) throw std::invalid_argument(fmt::format("loop at vertex {}", u));
    if (multiplicity == 0) return;
    mult_[ordered(u, w)] += multiplicity;
    degree_[u] += multiplicity;
    degree_[w] += multiplicity;
    edge_count_ += multiplicity;
}

std::uint64_t Multigraph::multiplicity(Vertex u, Vertex w) const {
    if (u == w) return 0;
    const auto it = mult_.find(ordered(u, w));
    return it == mult_.end() ? 0 : it->second;
}

std::uint64_t Multigraph::min_degree() const noexcept {
    if (degree_.empty()) return 0;
    return *std::min_element(degree_.begin(), degree_.end());
}

Multigraph merge(const Multigraph& a, const Multigraph& b) {
    if (a.vertex_count() != b.vertex_count()) {
        throw std::invalid_argument("merge: graphs have different vertex counts");
    }
    Multigraph out = a;
    for (const auto& [e, m] : b.edges()) out.add_edge(e.first, e.second, m);
    return out;
}

std::string dump_graph(const Multigraph& graph) {
    std::string out = fmt::format("v {}\n", graph.vertex_count());
    for (const auto& [e, m] : graph.edges()) {
        out += fmt::format("e {} {} {}\n", e.first, e.second, m);
    }
    return out;
}

Multigraph build_link_graph(const Presentation& presentation) {
    Multigraph graph(2 * presentation.generator_count());
    for (const Word& w : presentation.relations()) {
        for (const auto& [u, v] : relation_edges(w)) graph.add_edge(u, v);
    }
    return graph;
}

LinkDecomposition decompose_link_graph(const Presentation& presentation) {
    const std::uint32_t m = 2 * presentation.generator_count();
    LinkDecomposition d{{Multigraph(m), Multigraph(m), Multigraph(m)}, {}};
    d.provenance.reserve(presentation.relation_count());
    for (const Word& w : presentation.relations()) {
        const auto edges = relation_edges(w);
        for (std::size_t i = 0; i < 3; ++i) d.parts[i].add_edge(edges[i].first, edges[i].second);
        d.provenance.push_back(edges);
    }
    return d;
}

bool is_connected(const Multigraph& graph) {
    const std::uint32_t m = graph.vertex_count();
    if (m <= 1) return true;
    DisjointSet sets(m);
    for (const auto& [e, mult] : graph.edges()) sets.unite(e.first, e.second);
    return sets.component_count() == 1;
}

DegreeConcentration degree_concentration(const Multigraph& graph) {
    const std::uint32_t m = graph.vertex_count();
    if (m == 0) throw std::invalid_argument("degree_concentration: graph has no vertices");
    DegreeConcentration out;
    out.mean_degree = 2.0 * static_cast<double>(graph.edge_count()) / m;
    if (out.mean_degree == 0.0) {
        out.max_relative_deviation = std::numeric_limits<double>::infinity();
        return out;
    }
    double worst = 0.0;
    for (auto d : graph.degrees()) {
        worst = std::max(worst, std::abs(static_cast<double>(d) - out.mean_degree));
    }
    out.max_relative_deviation = worst / out.mean_degree;
    return out;
}

std::vector<Vertex> inverse_pairing(std::uint32_t generator_count) {
    std::vector<Vertex> pairing(2 * generator_count);
    for (Vertex v = 0; v < pairing.size(); ++v) pairing[v] = v ^ 1u;
    return pairing;
}

MultiplicityReport multiplicity_report(const Multigraph& graph, const std::vector<Vertex>& pairing) {
    const std::uint32_t m = graph.vertex_count();
    if (pairing.size() != m) {
        throw std::invalid_argument("multiplicity_report: pairing size differs from vertex count");
    }
    for (Vertex v = 0; v < m; ++v) {
        if (pairing[v] >= m || pairing[v] == v || pairing[pairing[v]] != v) {
            throw std::invalid_argument("multiplicity_report: pairing is not a fixed-point-free involution");
        }
    }
    MultiplicityReport report;
    std::vector<int> double_degree(m, 0);
    for (const auto& [e, mult] : graph.edges()) {
        report.max_multiplicity = std::max(report.max_multiplicity, mult);
        if (mult < 2) continue;
        if (pairing[e.first] == e.second) report.paired_multi_edge = true;
        const int du = ++double_degree[e.first];
        const int dw = ++double_degree[e.second];
        if (du > 1 || dw > 1) report.double_edges_form_matching = false;
    }
    return report;
}

std::uint64_t part_edge_capacity(std::uint32_t generator_count, Vertex u, Vertex w) {
    const std::uint64_t n = generator_count;
    if (n == 0 || u >= 2 * n || w >= 2 * n) {
        throw std::invalid_argument("part_edge_capacity: vertex out of range");
    }
    if (u == w) return 0;
    if ((u ^ 1u) == w) return 2 * (2 * n - 1);
    return 4 * (n - 1);
}

double comparison_edge_probability(std::uint32_t generator_count, double p) {
    const double exponent = 4.0 * generator_count - 4.0;
    return -std::expm1(exponent * std::log1p(-p));
}

}  // namespace trigroup
