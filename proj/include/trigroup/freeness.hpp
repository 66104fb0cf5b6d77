#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "trigroup/words.hpp"

namespace trigroup {

/// Zero-based position of a relation in Presentation::relations().
/// Text output shows it 1-based.
using RelationId = std::size_t;

enum class RelationKind { Type1, Type2, Type3 };

/// Sign-blind type of a relation. Type1: one generator three times, no
/// pivots. Type2: pattern {x, x, y}, pivot y. Type3: three distinct
/// generators, all pivotal.
struct RelationClass {
    RelationKind kind;
    std::vector<Generator> pivots;  ///< ascending
};

RelationClass classify_relation(const Word& w);

struct HyperEdge {
    RelationId relation;
    std::vector<Generator> vertices;  ///< ascending, size 1, 2 or 3
    std::vector<Generator> pivots;    ///< subset of vertices
};

/// Multi-hypergraph on the generators, one edge per relation.
struct Hypergraph {
    std::uint32_t vertex_count = 0;
    std::vector<HyperEdge> edges;
};

Hypergraph build_hypergraph(const Presentation& presentation);

struct Elimination {
    Generator generator;
    RelationId relation;

    bool operator==(const Elimination&) const = default;
};

/// Sequence of single-occurrence eliminations that empties the relation
/// set, proving the group free of rank n - t.
struct FreenessCertificate {
    std::vector<Elimination> eliminations;
    std::int64_t rank = 0;

    bool operator==(const FreenessCertificate&) const = default;
};

/// Greedy elimination got stuck; says nothing about freeness.
struct EliminationStuck {
    std::vector<RelationId> residual;  ///< ascending

    bool operator==(const EliminationStuck&) const = default;
};

using EliminationOutcome = std::variant<FreenessCertificate, EliminationStuck>;

/// Repeatedly removes the smallest generator that occurs (as itself or its
/// inverse) exactly once in the remaining relations, together with the
/// relation containing it.
EliminationOutcome greedy_eliminate(const Presentation& presentation);

struct ReplayResult {
    bool valid = false;
    std::string reason;  ///< empty when valid
};

/// Checks a certificate step by step against the presentation by direct
/// rescanning of the remaining relations.
ReplayResult replay_certificate(const Presentation& presentation,
                                const FreenessCertificate& certificate);

inline constexpr std::size_t kSubsetCheckLimit = 12;

/// Brute force over all nonempty relation subsets: does each one contain a
/// generator occurring exactly once in it? Throws std::invalid_argument
/// above kSubsetCheckLimit relations.
bool subset_property_check(const Presentation& presentation);

struct ComponentInfo {
    std::vector<Generator> vertices;   ///< ascending
    std::size_t degree_one_vertices;   ///< vertices lying in exactly one 3-edge
    std::size_t two_edges_touching;    ///< 2-edges meeting the component
};

/// Structure of the hypergraph seen through its 3-edges.
struct HypergraphReport {
    std::size_t one_edges = 0;
    std::size_t two_edges = 0;
    std::size_t three_edges = 0;
    /// Components of the 3-edge subgraph that contain at least one 3-edge.
    std::vector<ComponentInfo> components;
    bool two_edges_form_matching = true;
    bool each_component_meets_at_most_one_two_edge = true;
    /// Largest component of the 3-edge subgraph; 1 when there are no
    /// 3-edges and at least one vertex.
    std::size_t max_component_size = 0;
};

HypergraphReport hypergraph_diagnostics(const Hypergraph& hypergraph);

/// One line per elimination, then `rank <r>`.
std::string certificate_to_text(const FreenessCertificate& certificate);
/// {"eliminations":[{"generator":k,"relation":id},...],"rank":r}, ids 1-based.
std::string certificate_to_json(const FreenessCertificate& certificate);

}  // namespace trigroup
