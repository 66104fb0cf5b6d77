#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trigroup/words.hpp"

namespace trigroup {

/// Vertex ids of graphs on S ∪ S^-1: gk is 2k-2, Gk is 2k-1
/// (Letter::position()).
using Vertex = std::uint32_t;

/// Loop-free undirected multigraph with integer edge multiplicities.
class Multigraph {
public:
    using Edge = std::pair<Vertex, Vertex>;  ///< first < second

    explicit Multigraph(std::uint32_t vertex_count = 0) : degree_(vertex_count, 0) {}

    std::uint32_t vertex_count() const noexcept { return static_cast<std::uint32_t>(degree_.size()); }

    /// Throws std::invalid_argument on a loop or an out-of-range vertex.
    void add_edge(Vertex u, Vertex w, std::uint64_t multiplicity = 1);

    std::uint64_t multiplicity(Vertex u, Vertex w) const;
    std::uint64_t degree(Vertex v) const { return degree_.at(v); }
    const std::vector<std::uint64_t>& degrees() const noexcept { return degree_; }

    /// Sum of all multiplicities.
    std::uint64_t edge_count() const noexcept { return edge_count_; }
    /// Distinct adjacent pairs with their multiplicities, sorted.
    const std::map<Edge, std::uint64_t>& edges() const noexcept { return mult_; }

    std::uint64_t min_degree() const noexcept;

    bool operator==(const Multigraph&) const = default;

private:
    std::vector<std::uint64_t> degree_;
    std::map<Edge, std::uint64_t> mult_;
    std::uint64_t edge_count_ = 0;
};

/// Edge-multiset union; both graphs must share the vertex count.
Multigraph merge(const Multigraph& a, const Multigraph& b);

/// `v <count>` then `e <u> <w> <mult>` per distinct pair, sorted.
std::string dump_graph(const Multigraph& graph);

/// Link graph on 2n vertices: each relation abc contributes the edges
/// {a, b^-1}, {b, c^-1} and {c, a^-1}.
Multigraph build_link_graph(const Presentation& presentation);

struct LinkDecomposition {
    /// parts[0] gets {a, b^-1}, parts[1] gets {b, c^-1}, parts[2] gets {c, a^-1}.
    std::array<Multigraph, 3> parts;
    /// For each relation, the edge it placed in each part.
    std::vector<std::array<Multigraph::Edge, 3>> provenance;
};

LinkDecomposition decompose_link_graph(const Presentation& presentation);

/// Connectivity over all vertices; a graph with an isolated vertex (and at
/// least two vertices) is disconnected. Graphs on 0 or 1 vertices count as
/// connected.
bool is_connected(const Multigraph& graph);

struct DegreeConcentration {
    double mean_degree = 0.0;
    /// max_v |d(v) - mean| / mean, or +inf when the mean is zero.
    double max_relative_deviation = 0.0;
};

/// Throws std::invalid_argument on an empty vertex set.
DegreeConcentration degree_concentration(const Multigraph& graph);

/// gk <-> Gk.
std::vector<Vertex> inverse_pairing(std::uint32_t generator_count);

struct MultiplicityReport {
    std::uint64_t max_multiplicity = 0;
    /// No vertex is incident to two distinct pairs of multiplicity >= 2.
    bool double_edges_form_matching = true;
    /// Some pair {v, pairing(v)} has multiplicity >= 2.
    bool paired_multi_edge = false;
};

/// Throws std::invalid_argument unless `pairing` is a fixed-point-free
/// involution on the vertex set.
MultiplicityReport multiplicity_report(const Multigraph& graph, const std::vector<Vertex>& pairing);

/// Number of words whose edge in one fixed part of the decomposition joins
/// u and w (u != w). Equals 4(n-1) for w != u^-1 and 2(2n-1) for w = u^-1:
/// the 2n-1 words starting with u u plus the 2n-1 starting with u^-1 u^-1.
std::uint64_t part_edge_capacity(std::uint32_t generator_count, Vertex u, Vertex w);

/// Probability 1 - (1-p)^(4n-4) that a non-inverse pair is adjacent in one
/// part of the decomposition.
double comparison_edge_probability(std::uint32_t generator_count, double p);

}  // namespace trigroup
