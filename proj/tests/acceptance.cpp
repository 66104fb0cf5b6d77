// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "trigroup/freeness.hpp"
#include "trigroup/harness.hpp"
#include "trigroup/linkgraph.hpp"
#include "trigroup/rng.hpp"
#include "trigroup/spectra.hpp"
#include "trigroup/words.hpp"

using namespace trigroup;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = false;
    std::string detail;
    double extra_seconds = 0.0;  // work done outside the timed body, e.g. a shared sweep
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, fmt::format("exception: {}", e.what())};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count() + out.extra_seconds;
    const bool in_time = budget_seconds <= 0 || seconds <= budget_seconds;
    const bool pass = out.ok && in_time;
    if (!pass) ++failures;
    const std::string budget = budget_seconds > 0 ? fmt::format(", budget {:g} s", budget_seconds) : "";
    fmt::print("criterion {:>2} {}: {}  {} ({:.2f} s{}{})\n", id, name, pass ? "PASS" : "FAIL", out.detail,
               seconds, budget, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

// Raw-id enumeration: letter ids 0..2n-1 with id ^ 1 the inverse.
std::pair<std::uint64_t, std::uint64_t> brute_force_counts(std::uint32_t n) {
    std::uint64_t total = 0, touching_last = 0;
    const std::uint32_t letters = 2 * n;
    for (std::uint32_t a = 0; a < letters; ++a)
        for (std::uint32_t b = 0; b < letters; ++b)
            for (std::uint32_t c = 0; c < letters; ++c) {
                if (b == (a ^ 1) || c == (b ^ 1) || a == (c ^ 1)) continue;
                ++total;
                if (a / 2 == n - 1 || b / 2 == n - 1 || c / 2 == n - 1) ++touching_last;
            }
    return {total, touching_last};
}

Multigraph complete_graph(std::uint32_t m) {
    Multigraph k(m);
    for (Vertex i = 0; i < m; ++i)
        for (Vertex j = i + 1; j < m; ++j) k.add_edge(i, j);
    return k;
}

Multigraph random_graph(std::uint32_t m, double q, SplitMix64& rng) {
    Multigraph out(m);
    for (Vertex i = 0; i < m; ++i)
        for (Vertex j = i + 1; j < m; ++j)
            if (rng.uniform01() < q) out.add_edge(i, j);
    return out;
}

const char* kSweepConfig =
    "master_seed = 20240601\n"
    "cell = n=100 p=0.01/n^2 trials=200\n"
    "cell = n=200 p=4/n^2 trials=100 spectra=off\n"
    "cell = n=500 p=0.02*log(n)/n^2 trials=100 spectra=off\n"
    "cell = n=150 p=30*log(n)/n^2 trials=20\n";

}  // namespace

int main() {
    criterion(1, "counting oracle", 1.0, [] {
        bool ok = true;
        const std::uint64_t frozen[] = {2, 28, 126, 344};
        for (std::uint32_t n = 1; n <= 4; ++n) {
            const auto [total, touching] = brute_force_counts(n);
            ok = ok && total == frozen[n - 1] && count_words(n) == total && enumerate_words(n).size() == total;
            if (n >= 2) {
                const std::uint64_t k = n - 1;
                const std::uint64_t formula = 48 * (k * (k - 1) / 2) + 24 * k + 2;
                ok = ok && count_words_containing(n) == formula && formula == touching &&
                     count_words(n) - count_words(n - 1) == formula;
            }
        }
        std::uint64_t kinds[3] = {0, 0, 0};
        for (const auto& w : enumerate_words(4)) ++kinds[static_cast<int>(classify_relation(w).kind)];
        return Outcome{ok, fmt::format("counts 2/28/126/344 exact; n=4 types {}/{}/{}", kinds[0], kinds[1],
                                       kinds[2])};
    });

    criterion(2, "eigensolver", 5.0, [] {
        bool ok = true;
        double worst_spectrum = 0.0, worst_residual = 0.0, worst_trace = 0.0;
        auto check_range = [&](const std::vector<double>& values) {
            for (double v : values) ok = ok && v >= -1e-10 && v <= 2.0 + 1e-10;
        };
        for (std::uint32_t m = 3; m <= 10; ++m) {
            const auto lap = normalized_laplacian(complete_graph(m));
            const auto e = sym_eigs(lap, {.tol = 1e-10, .want_vectors = true});
            worst_spectrum = std::max(worst_spectrum, std::abs(e.values[0]));
            for (std::size_t k = 1; k < m; ++k) {
                worst_spectrum = std::max(worst_spectrum, std::abs(e.values[k] - double(m) / (m - 1)));
            }
            worst_residual = std::max(worst_residual, e.max_residual / e.norm);
            worst_trace = std::max(worst_trace, e.trace_error / (m * e.norm));
            check_range(e.values);
        }
        SplitMix64 rng(2);
        for (int i = 0; i < 40; ++i) {
            const auto graph = random_graph(5 + i, 0.1 + 0.02 * i, rng);
            const auto e = sym_eigs(normalized_laplacian(graph), {.tol = 1e-10, .want_vectors = true});
            check_range(e.values);
            if (e.norm > 0) {
                worst_residual = std::max(worst_residual, e.max_residual / e.norm);
                worst_trace = std::max(worst_trace, e.trace_error / (e.values.size() * e.norm));
            }
        }
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const std::uint32_t n = 10 + 4 * std::uint32_t(seed);
            check_range(spectral_gap(build_link_graph(sample_binomial(n, 2.0 * std::log(n) / (n * n), seed))).eigenvalues);
        }
        ok = ok && worst_spectrum <= 1e-9 && worst_residual <= 1e-10 && worst_trace <= 1e-10;
        return Outcome{ok, fmt::format("K_m error {:.1e}, residual/||M|| {:.1e}, trace/(m||M||) {:.1e}",
                                       worst_spectrum, worst_residual, worst_trace)};
    });

    SweepResult sweep;
    std::string first_csv;
    double sweep_seconds = 0.0;
    std::string sweep_error;
    try {
        const auto start = Clock::now();
        sweep = run_sweep(parse_sweep_config(kSweepConfig));
        first_csv = sweep_csv(sweep);
        sweep_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    } catch (const std::exception& e) {
        sweep_error = e.what();
    }
    auto cell = [&](std::size_t c) -> const CellSummary& {
        if (!sweep_error.empty()) throw std::runtime_error("sweep failed: " + sweep_error);
        return sweep.summaries.at(c);
    };
    auto seconds_of = [&](std::size_t c) { return sweep_error.empty() ? cell(c).wall_ms / 1000.0 : 0.0; };

    criterion(3, "free regime, n=100 p=0.01/n^2", 10.0, [&] {
        const auto& s = cell(0);
        std::uint64_t replayed = 0, invalid = 0;
        for (const auto& row : sweep.rows) {
            if (row.cell != 0 || !row.verdict.free_certificate) continue;
            const auto pres = sample_binomial(row.verdict.n, row.p, row.seed);
            ++replayed;
            invalid += !replay_certificate(pres, *row.verdict.free_certificate).valid;
        }
        const bool ok = s.free_certified * 10 >= s.trials * 9 && invalid == 0 && replayed == s.free_certified;
        return Outcome{ok,
                       fmt::format("free certified {}/{}, {} replayed, {} invalid, mean t {:.1f}", s.free_certified,
                                   s.trials, replayed, invalid, s.mean_relations),
                       seconds_of(0)};
    });

    criterion(4, "chi witness, n=200 p=4/n^2", 120.0, [&] {
        const auto& s = cell(1);
        return Outcome{s.chi_witnessed * 100 >= s.trials * 99,
                       fmt::format("chi > 0 in {}/{}, mean t {:.1f}", s.chi_witnessed, s.trials, s.mean_relations),
                       seconds_of(1)};
    });

    criterion(5, "isolated generator witness, n=500 p=log(n)/(50 n^2)", 60.0, [&] {
        const auto& s = cell(2);
        std::uint64_t isolated_total = 0;
        for (const auto& row : sweep.rows) {
            if (row.cell == 2) isolated_total += row.verdict.isolated.generators.size();
        }
        return Outcome{s.isolated_witnessed * 10 >= s.trials * 9,
                       fmt::format("isolated generator in {}/{}, mean count {:.1f}", s.isolated_witnessed, s.trials,
                                   s.trials ? double(isolated_total) / double(s.trials) : 0.0),
                       seconds_of(2)};
    });

    criterion(6, "(T) regime, n=150 p=30 log(n)/n^2", 300.0, [&] {
        const auto& s = cell(3);
        std::uint64_t checked = 0;
        double min_lambda2 = INFINITY;
        for (const auto& row : sweep.rows) {
            if (row.cell != 3) continue;
            const auto& v = row.verdict;
            min_lambda2 = std::min(min_lambda2, v.lambda2);
            checked += v.t_status == TStatus::Certified && v.connected && v.lambda2 > 0.5 + 1e-8;
        }
        return Outcome{checked * 10 >= s.trials * 9 && checked == s.t_certified,
                       fmt::format("certified {}/{}, min lambda2 {:.6f}, errors {}", checked, s.trials, min_lambda2,
                                   s.errors),
                       seconds_of(3)};
    });

    criterion(7, "spectral inequalities", 180.0, [] {
        SplitMix64 rng(7);
        int perturbation_checked = 0, perturbation_violations = 0, attempts = 0;
        double min_slack = INFINITY;
        while (perturbation_checked < 100 && attempts < 10'000) {
            ++attempts;
            const std::uint32_t m = 10 + static_cast<std::uint32_t>(rng.below(51));
            const auto g = random_graph(m, 0.5 + 0.4 * rng.uniform01(), rng);
            if (!is_connected(g)) continue;
            const auto conc = degree_concentration(g);
            const double d = conc.mean_degree;
            const double eps = conc.max_relative_deviation + 0.02 + 0.3 * rng.uniform01();
            if (eps >= 1.0) continue;
            Multigraph h(m);
            for (std::uint32_t k = 0; k < 3 * m; ++k) {
                const auto u = static_cast<Vertex>(rng.below(m)), w = static_cast<Vertex>(rng.below(m));
                if (u == w || double(h.degree(u) + 1) > eps * d || double(h.degree(w) + 1) > eps * d) continue;
                h.add_edge(u, w);
            }
            const auto r = check_perturbation_inequality(g, h, eps, d);
            ++perturbation_checked;
            perturbation_violations += !r.holds;
            min_slack = std::min(min_slack, r.slack);
        }

        int combination_checked = 0, combination_violations = 0;
        double min_margin = INFINITY;
        const double p = 20.0 * std::log(40.0) / 1600.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto d = decompose_link_graph(sample_binomial(40, p, seed));
            const auto r = check_combination_inequality(d.parts[0], d.parts[1], d.parts[2]);
            ++combination_checked;
            combination_violations += !r.holds;
            min_margin = std::min(min_margin, r.rhs - r.lhs);
        }
        const bool ok = perturbation_checked == 100 && perturbation_violations == 0 && combination_checked == 50 &&
                        combination_violations == 0;
        return Outcome{ok, fmt::format("perturbation {}/{} hold (min slack {:.4f}), combination {}/{} hold (min "
                                       "margin {:.4f})",
                                       perturbation_checked - perturbation_violations, perturbation_checked,
                                       min_slack, combination_checked - combination_violations,
                                       combination_checked, min_margin)};
    });

    criterion(8, "subset property implies greedy success", 60.0, [] {
        int property_holds = 0, violations = 0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const std::uint32_t n = 1 + static_cast<std::uint32_t>(seed % 8);
            const std::uint64_t t = std::min<std::uint64_t>(seed % 11, count_words(n));
            const auto pres = sample_uniform(n, t, seed);
            if (!subset_property_check(pres)) continue;
            ++property_holds;
            violations += !std::holds_alternative<FreenessCertificate>(greedy_eliminate(pres));
        }
        return Outcome{violations == 0,
                       fmt::format("{} of 1000 instances have the subset property, {} violations", property_holds,
                                   violations)};
    });

    criterion(9, "structural invariants", 120.0, [] {
        const char* shapes[] = {"0.01/n^2", "0.5/n^2", "4/n^2", "0.02*log(n)/n^2", "30*log(n)/n^2"};
        int violations = 0;
        std::string first;
        auto fail = [&](std::uint64_t seed, const std::string& what) {
            if (first.empty()) first = fmt::format(" (first: seed {} {})", seed, what);
            ++violations;
        };
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const std::uint32_t n = 3 + static_cast<std::uint32_t>((seed * 7919) % 58);
            const auto p = PExpression::parse(shapes[seed % 5]).evaluate(n);
            const auto pres = sample_binomial(n, std::min(p, 1.0), seed);
            const auto t = pres.relation_count();
            const auto link = build_link_graph(pres);
            if (link.edge_count() != 3 * t) fail(seed, "edge count");
            for (const auto& [e, mult] : link.edges()) {
                if (e.first >= e.second) fail(seed, "loop");
            }
            const auto d = decompose_link_graph(pres);
            if (merge(merge(d.parts[0], d.parts[1]), d.parts[2]) != link) fail(seed, "reconstruction");
            if (build_hypergraph(pres).edges.size() != t) fail(seed, "hypergraph edges");
            try {
                const auto v = classify_trial(pres);
                if (v.euler.chi + std::int64_t(n) - 1 != std::int64_t(t)) fail(seed, "chi arithmetic");
            } catch (const VerdictConflict& e) {
                fail(seed, e.what());
            }
        }
        return Outcome{violations == 0, fmt::format("500 presentations, {} violations{}", violations, first)};
    });

    criterion(10, "determinism", 0.0, [&] {
        if (!sweep_error.empty()) throw std::runtime_error("sweep failed: " + sweep_error);
        const auto again = sweep_csv(run_sweep(parse_sweep_config(kSweepConfig)));
        return Outcome{again == first_csv,
                       fmt::format("{} CSV bytes, {} (first run {:.2f} s)", again.size(),
                                   again == first_csv ? "identical" : "differ", sweep_seconds)};
    });

    fmt::print("{} of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
