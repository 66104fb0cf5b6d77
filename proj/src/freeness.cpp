#include "trigroup/freeness.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "trigroup/disjoint_set.hpp"

namespace trigroup {

RelationClass classify_relation(const Word& w) {
    std::array<Generator, 3> gens{w[0].generator, w[1].generator, w[2].generator};
    std::sort(gens.begin(), gens.end());
    if (gens[0] == gens[2]) return {RelationKind::Type1, {}};
    if (gens[0] == gens[1]) return {RelationKind::Type2, {gens[2]}};
    if (gens[1] == gens[2]) return {RelationKind::Type2, {gens[0]}};
    return {RelationKind::Type3, {gens[0], gens[1], gens[2]}};
}

Hypergraph build_hypergraph(const Presentation& presentation) {
    Hypergraph h;
    h.vertex_count = presentation.generator_count();
    h.edges.reserve(presentation.relation_count());
    const auto& relations = presentation.relations();
    for (RelationId id = 0; id < relations.size(); ++id) {
        const Word& w = relations[id];
        std::vector<Generator> vertices{w[0].generator, w[1].generator, w[2].generator};
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        h.edges.push_back({id, std::move(vertices), classify_relation(w).pivots});
    }
    return h;
}

EliminationOutcome greedy_eliminate(const Presentation& presentation) {
    const std::uint32_t n = presentation.generator_count();
    const auto& relations = presentation.relations();

    std::vector<int> count(n + 1, 0);
    std::vector<std::vector<RelationId>> containing(n + 1);
    for (RelationId id = 0; id < relations.size(); ++id) {
        for (const Letter& l : relations[id].letters()) {
            if (++count[l.generator] == 1 || containing[l.generator].back() != id) {
                containing[l.generator].push_back(id);
            }
        }
    }
    std::set<Generator> singles;
    for (Generator s = 1; s <= n; ++s) {
        if (count[s] == 1) singles.insert(s);
    }

    std::vector<bool> active(relations.size(), true);
    std::size_t remaining = relations.size();
    FreenessCertificate cert;
    while (remaining > 0) {
        if (singles.empty()) {
            EliminationStuck stuck;
            for (RelationId id = 0; id < relations.size(); ++id) {
                if (active[id]) stuck.residual.push_back(id);
            }
            return stuck;
        }
        const Generator a = *singles.begin();
        const auto& candidates = containing[a];
        const auto it = std::find_if(candidates.begin(), candidates.end(),
                                     [&](RelationId id) { return active[id]; });
        const RelationId r = *it;

        cert.eliminations.push_back({a, r});
        active[r] = false;
        --remaining;
        for (const Letter& l : relations[r].letters()) {
            const int c = --count[l.generator];
            if (c == 1) {
                singles.insert(l.generator);
            } else {
                singles.erase(l.generator);
            }
        }
    }
    cert.rank = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(relations.size());
    return cert;
}

ReplayResult replay_certificate(const Presentation& presentation,
                                const FreenessCertificate& certificate) {
    const auto& relations = presentation.relations();
    const std::uint32_t n = presentation.generator_count();
    std::vector<bool> removed(relations.size(), false);
    std::vector<bool> used(n + 1, false);

    auto fail = [](std::string why) { return ReplayResult{false, std::move(why)}; };

    for (std::size_t step = 0; step < certificate.eliminations.size(); ++step) {
        const auto [a, r] = certificate.eliminations[step];
        if (a < 1 || a > n) return fail(fmt::format("step {}: generator {} out of range", step, a));
        if (r >= relations.size()) {
            return fail(fmt::format("step {}: relation {} out of range", step, r + 1));
        }
        if (used[a]) return fail(fmt::format("step {}: generator g{} already eliminated", step, a));
        if (removed[r]) {
            return fail(fmt::format("step {}: relation {} already eliminated", step, r + 1));
        }
        if (relations[r].occurrences(a) != 1) {
            return fail(fmt::format("step {}: g{} does not occur exactly once in relation {}",
                                    step, a, r + 1));
        }
        for (RelationId other = 0; other < relations.size(); ++other) {
            if (other != r && !removed[other] && relations[other].occurrences(a) != 0) {
                return fail(fmt::format("step {}: g{} also occurs in relation {}", step, a,
                                        other + 1));
            }
        }
        used[a] = true;
        removed[r] = true;
    }
    if (certificate.eliminations.size() != relations.size()) {
        return fail(fmt::format("{} eliminations for {} relations",
                                certificate.eliminations.size(), relations.size()));
    }
    const auto expected_rank =
        static_cast<std::int64_t>(n) - static_cast<std::int64_t>(relations.size());
    if (certificate.rank != expected_rank) {
        return fail(fmt::format("rank {} but n - t = {}", certificate.rank, expected_rank));
    }
    return {true, {}};
}

bool subset_property_check(const Presentation& presentation) {
    const auto& relations = presentation.relations();
    const std::size_t t = relations.size();
    if (t > kSubsetCheckLimit) {
        throw std::invalid_argument(fmt::format(
            "subset_property_check: {} relations exceed the limit {}", t, kSubsetCheckLimit));
    }
    const std::uint32_t n = presentation.generator_count();
    std::vector<int> count(n + 1);
    for (std::uint32_t mask = 1; mask < (1u << t); ++mask) {
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t i = 0; i < t; ++i) {
            if (mask & (1u << i)) {
                for (const Letter& l : relations[i].letters()) ++count[l.generator];
            }
        }
        // A generator with total count one lies in exactly one relation of
        // the subset and occurs there exactly once.
        if (std::find(count.begin(), count.end(), 1) == count.end()) return false;
    }
    return true;
}

HypergraphReport hypergraph_diagnostics(const Hypergraph& hypergraph) {
    HypergraphReport report;
    const std::uint32_t n = hypergraph.vertex_count;
    DisjointSet components(n);
    std::vector<std::size_t> three_degree(n, 0);
    std::vector<std::size_t> two_degree(n, 0);

    for (const auto& e : hypergraph.edges) {
        switch (e.vertices.size()) {
            case 1:
                ++report.one_edges;
                break;
            case 2:
                ++report.two_edges;
                for (Generator v : e.vertices) {
                    if (++two_degree[v - 1] > 1) report.two_edges_form_matching = false;
                }
                break;
            default:
                ++report.three_edges;
                for (Generator v : e.vertices) ++three_degree[v - 1];
                components.unite(e.vertices[0] - 1, e.vertices[1] - 1);
                components.unite(e.vertices[0] - 1, e.vertices[2] - 1);
                break;
        }
    }

    std::map<std::size_t, std::size_t> slot_of_root;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (three_degree[v] == 0) continue;
        const auto root = components.find(v);
        auto [it, fresh] = slot_of_root.try_emplace(root, report.components.size());
        if (fresh) report.components.push_back({{}, 0, 0});
        auto& info = report.components[it->second];
        info.vertices.push_back(v + 1);
        if (three_degree[v] == 1) ++info.degree_one_vertices;
    }

    for (const auto& e : hypergraph.edges) {
        if (e.vertices.size() != 2) continue;
        std::set<std::size_t> touched;
        for (Generator v : e.vertices) {
            if (three_degree[v - 1] > 0) touched.insert(slot_of_root.at(components.find(v - 1)));
        }
        for (auto slot : touched) {
            if (++report.components[slot].two_edges_touching > 1) {
                report.each_component_meets_at_most_one_two_edge = false;
            }
        }
    }

    report.max_component_size = n > 0 ? 1 : 0;
    for (const auto& c : report.components) {
        report.max_component_size = std::max(report.max_component_size, c.vertices.size());
    }
    return report;
}

std::string certificate_to_text(const FreenessCertificate& certificate) {
    std::string out;
    for (const auto& e : certificate.eliminations) {
        out += fmt::format("eliminate g{} using relation {}\n", e.generator, e.relation + 1);
    }
    out += fmt::format("rank {}\n", certificate.rank);
    return out;
}

std::string certificate_to_json(const FreenessCertificate& certificate) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& e : certificate.eliminations) {
        steps.push_back({{"generator", e.generator}, {"relation", e.relation + 1}});
    }
    nlohmann::json doc{{"eliminations", steps}, {"rank", certificate.rank}};
    return doc.dump();
}

}  // namespace trigroup
