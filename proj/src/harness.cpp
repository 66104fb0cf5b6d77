#include "trigroup/harness.hpp"

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "trigroup/linkgraph.hpp"
#include "trigroup/rng.hpp"
#include "trigroup/spectra.hpp"

namespace trigroup {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s, std::string_view what) {
    const std::string buf(trim(s));
    char* end = nullptr;
    const double value = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(value)) {
        throw std::invalid_argument(fmt::format("{}: cannot parse '{}' as a number", what, buf));
    }
    return value;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    const std::string buf(trim(s));
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(buf.c_str(), &end, 10);
    if (buf.empty() || buf[0] == '-' || end != buf.c_str() + buf.size() || errno == ERANGE) {
        throw std::invalid_argument(fmt::format("{}: cannot parse '{}' as an integer", what, buf));
    }
    return value;
}

bool parse_flag(std::string_view s, std::string_view what) {
    const auto v = trim(s);
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    throw std::invalid_argument(fmt::format("{}: expected on/off, got '{}'", what, v));
}

std::string fmt_double(double x) {
    if (std::isnan(x)) return {};
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", x);
}

}  // namespace

double presentation_density(std::uint32_t n, std::size_t t) {
    if (n < 2) return kNaN;
    if (t == 0) return -std::numeric_limits<double>::infinity();
    return std::log(static_cast<double>(t)) / (3.0 * std::log(static_cast<double>(n)));
}

EulerWitness euler_characteristic(const Presentation& presentation) {
    EulerWitness w;
    const auto n = static_cast<std::int64_t>(presentation.generator_count());
    const auto t = static_cast<std::int64_t>(presentation.relation_count());
    w.chi = 1 - n + t;
    w.witness = w.chi > 0;
    w.density = presentation_density(presentation.generator_count(), presentation.relation_count());
    w.assumption_in_range = w.density < 0.5;
    return w;
}

IsolatedWitness find_isolated_generators(const Presentation& presentation) {
    const std::uint32_t n = presentation.generator_count();
    std::vector<bool> seen(n + 1, false);
    for (const Word& w : presentation.relations()) {
        for (const Letter& l : w.letters()) seen[l.generator] = true;
    }
    IsolatedWitness out;
    for (Generator s = 1; s <= n; ++s) {
        if (!seen[s]) out.generators.push_back(s);
    }
    out.witness = !out.generators.empty();
    out.density = presentation_density(n, presentation.relation_count());
    out.assumption_in_range = out.density < 4.0 / 9.0;
    return out;
}

TrialVerdict classify_trial(const Presentation& presentation, const TrialOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    TrialVerdict v;
    v.n = presentation.generator_count();
    v.t = presentation.relation_count();

    auto outcome = greedy_eliminate(presentation);
    if (auto* cert = std::get_if<FreenessCertificate>(&outcome)) {
        v.free_certificate = std::move(*cert);
    } else {
        v.stuck_residual = std::move(std::get<EliminationStuck>(outcome).residual);
    }
    v.euler = euler_characteristic(presentation);
    v.isolated = find_isolated_generators(presentation);
    v.max_h_component = hypergraph_diagnostics(build_hypergraph(presentation)).max_component_size;

    const Multigraph link = build_link_graph(presentation);
    v.degree_deviation = degree_concentration(link).max_relative_deviation;
    v.connected = is_connected(link);
    v.lambda2 = kNaN;
    if (options.run_spectra) {
        try {
            const auto zuk = zuk_certificate(link, options.margin, GapOptions{options.tol, true});
            v.lambda2 = zuk.lambda2;
            v.t_status = zuk.certified ? TStatus::Certified : TStatus::Inconclusive;
        } catch (const SolverError& e) {
            v.error = e.what();
            v.t_status = TStatus::Inconclusive;
        }
    } else {
        v.t_status = TStatus::Skipped;
    }

    if (v.free_certified() && v.euler.witness) {
        throw VerdictConflict(fmt::format(
            "freeness certified (rank {}) while chi = {} > 0", v.free_certificate->rank, v.euler.chi));
    }
    if (v.t_status == TStatus::Certified && v.isolated.witness) {
        throw VerdictConflict("property (T) certified while a generator is isolated");
    }

    if (options.record_timing) {
        v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                           .count();
    }
    return v;
}

std::string_view to_string(TStatus status) noexcept {
    switch (status) {
        case TStatus::Certified: return "certified";
        case TStatus::Inconclusive: return "inconclusive";
        case TStatus::Skipped: return "skipped";
    }
    return "?";
}

std::string verdict_to_text(const TrialVerdict& v) {
    std::string out = fmt::format("generators {}  relations {}\n", v.n, v.t);
    if (v.free_certificate) {
        out += fmt::format("free: certified, rank {}\n", v.free_certificate->rank);
        out += certificate_to_text(*v.free_certificate);
    } else {
        out += fmt::format("free: inconclusive ({} relations left after elimination)\n",
                           v.stuck_residual.size());
    }
    out += fmt::format("euler characteristic: {}{}\n", v.euler.chi,
                       v.euler.witness ? fmt::format("  -> not free, assumes {}{}", EulerWitness::kAssumes,
                                                     v.euler.assumption_in_range ? "" : " [outside range]")
                                       : "");
    if (v.isolated.witness) {
        out += fmt::format("isolated generators: {}  -> not (T), assumes {}{}\n",
                           fmt::join(v.isolated.generators, " "), IsolatedWitness::kAssumes,
                           v.isolated.assumption_in_range ? "" : " [outside range]");
    } else {
        out += "isolated generators: none\n";
    }
    out += fmt::format("link graph: {}connected, degree deviation {}\n", v.connected ? "" : "not ",
                       fmt_double(v.degree_deviation));
    out += fmt::format("property (T): {}", to_string(v.t_status));
    if (!std::isnan(v.lambda2)) out += fmt::format(", lambda2 = {:.12f}", v.lambda2);
    out += '\n';
    if (v.error) out += fmt::format("error: {}\n", *v.error);
    return out;
}

std::string verdict_to_json(const TrialVerdict& v) {
    using nlohmann::json;
    json free{{"status", v.free_certified() ? "certified" : "inconclusive"}};
    if (v.free_certificate) {
        free["certificate"] = json::parse(certificate_to_json(*v.free_certificate));
    } else {
        json residual = json::array();
        for (auto id : v.stuck_residual) residual.push_back(id + 1);
        free["residual"] = residual;
    }
    json doc{
        {"n", v.n},
        {"t", v.t},
        {"free", free},
        {"not_free_witness",
         {{"chi", v.euler.chi},
          {"witness", v.euler.witness},
          {"assumes", EulerWitness::kAssumes},
          {"assumption_in_range", v.euler.assumption_in_range}}},
        {"not_t_witness",
         {{"isolated_generators", v.isolated.generators},
          {"witness", v.isolated.witness},
          {"assumes", IsolatedWitness::kAssumes},
          {"assumption_in_range", v.isolated.assumption_in_range}}},
        {"t_cert",
         {{"status", to_string(v.t_status)},
          {"connected", v.connected},
          {"lambda2", std::isnan(v.lambda2) ? json(nullptr) : json(v.lambda2)}}},
        {"stats",
         {{"max_h_component", v.max_h_component},
          {"degree_dev", std::isfinite(v.degree_deviation) ? json(v.degree_deviation) : json(nullptr)},
          {"elapsed_ms", v.elapsed_ms}}},
        {"error", v.error ? json(*v.error) : json(nullptr)},
    };
    return doc.dump();
}

PExpression PExpression::parse(std::string_view text) {
    PExpression e;
    const auto body = trim(text);
    e.text_ = std::string(body);
    constexpr std::string_view kAbs = "abs:";
    constexpr std::string_view kLog = "log(n)/n^2";
    constexpr std::string_view kPoly = "/n^2";
    auto ends_with = [&](std::string_view suffix) {
        return body.size() >= suffix.size() && body.substr(body.size() - suffix.size()) == suffix;
    };
    if (body.substr(0, kAbs.size()) == kAbs) {
        e.shape_ = Shape::Absolute;
        e.coefficient_ = parse_double(body.substr(kAbs.size()), "p-expression");
    } else if (ends_with(kLog)) {
        e.shape_ = Shape::LogOverNSquared;
        auto head = body.substr(0, body.size() - kLog.size());
        if (head.empty()) {
            e.coefficient_ = 1.0;
        } else if (head.back() == '*') {
            e.coefficient_ = parse_double(head.substr(0, head.size() - 1), "p-expression");
        } else {
            throw std::invalid_argument(fmt::format("p-expression: cannot parse '{}'", body));
        }
    } else if (ends_with(kPoly)) {
        e.shape_ = Shape::OverNSquared;
        e.coefficient_ = parse_double(body.substr(0, body.size() - kPoly.size()), "p-expression");
    } else {
        throw std::invalid_argument(fmt::format(
            "p-expression: '{}' is not of the form c/n^2, c*log(n)/n^2 or abs:p", body));
    }
    return e;
}

double PExpression::evaluate(std::uint32_t n) const {
    const double nn = static_cast<double>(n);
    switch (shape_) {
        case Shape::OverNSquared: return coefficient_ / (nn * nn);
        case Shape::LogOverNSquared: return coefficient_ * std::log(nn) / (nn * nn);
        case Shape::Absolute: return coefficient_;
    }
    return kNaN;
}

void SweepConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("sweep config: tol must be positive");
    for (const auto& cell : grid) {
        if (cell.n == 0) throw std::invalid_argument("sweep config: n must be at least 1");
        const double p = cell.p.evaluate(cell.n);
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument(fmt::format("sweep config: p = {} evaluates to {} at n = {}",
                                                    cell.p.text(), p, cell.n));
        }
    }
}

namespace {

SweepCell parse_cell(std::string_view fields) {
    SweepCell cell;
    bool have_n = false, have_p = false, have_trials = false;
    std::size_t i = 0;
    while (i < fields.size()) {
        while (i < fields.size() && (fields[i] == ' ' || fields[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < fields.size() && fields[j] != ' ' && fields[j] != '\t') ++j;
        if (j == i) break;
        const auto token = fields.substr(i, j - i);
        i = j;
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument(fmt::format("sweep cell: bad field '{}'", token));
        }
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        if (key == "n") {
            const auto n = parse_u64(value, "sweep cell n");
            if (n == 0 || n > std::numeric_limits<std::uint32_t>::max()) {
                throw std::invalid_argument("sweep cell: n out of range");
            }
            cell.n = static_cast<std::uint32_t>(n);
            have_n = true;
        } else if (key == "p") {
            cell.p = PExpression::parse(value);
            have_p = true;
        } else if (key == "trials") {
            cell.trials = parse_u64(value, "sweep cell trials");
            have_trials = true;
        } else if (key == "spectra") {
            cell.spectra = parse_flag(value, "sweep cell spectra");
        } else {
            throw std::invalid_argument(fmt::format("sweep cell: unknown field '{}'", key));
        }
    }
    if (!have_n || !have_p || !have_trials) {
        throw std::invalid_argument("sweep cell: n, p and trials are required");
    }
    return cell;
}

}  // namespace

SweepConfig parse_sweep_config(std::string_view text) {
    SweepConfig config;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument(fmt::format("sweep config line {}: expected key = value", line_no));
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "cell") {
            config.grid.push_back(parse_cell(value));
        } else if (key == "master_seed") {
            config.master_seed = parse_u64(value, "master_seed");
        } else if (key == "tol") {
            config.tol = parse_double(value, "tol");
        } else if (key == "margin") {
            config.margin = parse_double(value, "margin");
        } else if (key == "threads") {
            config.threads = static_cast<unsigned>(parse_u64(value, "threads"));
        } else if (key == "record_timing") {
            config.record_timing = parse_flag(value, "record_timing");
        } else if (key == "output") {
            config.output = std::string(value);
        } else {
            throw std::invalid_argument(fmt::format("sweep config line {}: unknown key '{}'", line_no, key));
        }
    }
    config.validate();
    return config;
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();
    SweepResult result;
    for (std::size_t c = 0; c < config.grid.size(); ++c) {
        const auto& cell = config.grid[c];
        const double p = cell.p.evaluate(cell.n);
        for (std::uint64_t i = 0; i < cell.trials; ++i) {
            result.rows.push_back({c, i, p, trial_seed(config.master_seed, c, i), {}});
        }
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= result.rows.size()) return;
            auto& row = result.rows[k];
            const auto& cell = config.grid[row.cell];
            const auto start = std::chrono::steady_clock::now();
            try {
                const auto presentation = sample_binomial(cell.n, row.p, row.seed);
                TrialOptions options;
                options.run_spectra = cell.spectra;
                options.tol = config.tol;
                options.margin = config.margin;
                options.record_timing = config.record_timing;
                row.verdict = classify_trial(presentation, options);
                row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                                  .count();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(result.rows.size());
                return;
            }
        }
    };

    const unsigned threads = std::max(1u, config.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    result.summaries.resize(config.grid.size());
    for (std::size_t c = 0; c < config.grid.size(); ++c) {
        auto& s = result.summaries[c];
        s.n = config.grid[c].n;
        s.p_expression = config.grid[c].p.text();
        s.p = config.grid[c].p.evaluate(s.n);
        s.trials = config.grid[c].trials;
    }
    for (const auto& row : result.rows) {
        auto& s = result.summaries[row.cell];
        const auto& v = row.verdict;
        s.free_certified += v.free_certified();
        s.chi_witnessed += v.euler.witness;
        s.isolated_witnessed += v.isolated.witness;
        s.t_certified += v.t_status == TStatus::Certified;
        s.connected += v.connected;
        s.errors += v.error.has_value();
        s.mean_relations += static_cast<double>(v.t);
        s.wall_ms += row.wall_ms;
    }
    for (auto& s : result.summaries) {
        if (s.trials > 0) s.mean_relations /= static_cast<double>(s.trials);
    }
    return result;
}

std::string csv_row(const SweepRow& row) {
    const auto& v = row.verdict;
    std::string error;
    if (v.error) {
        error = *v.error;
        for (char& ch : error) {
            if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
        }
    }
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", v.n, fmt_double(row.p),
                       row.seed, row.trial, v.t, v.free_certified() ? "certified" : "inconclusive",
                       v.free_certificate ? fmt::format("{}", v.free_certificate->rank) : std::string{},
                       v.euler.chi, v.euler.witness ? 1 : 0, v.isolated.generators.size(),
                       v.connected ? 1 : 0, fmt_double(v.lambda2), to_string(v.t_status),
                       v.max_h_component, fmt_double(v.degree_deviation), error,
                       fmt::format("{:.3f}", v.elapsed_ms));
}

std::string sweep_csv(const SweepResult& result) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& row : result.rows) out += csv_row(row);
    return out;
}

std::string sweep_summary(const SweepResult& result) {
    std::string out = fmt::format("{:>6} {:>22} {:>12} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>10}\n", "n",
                                  "p", "p-value", "trials", "free", "chi>0", "isol", "T", "errors",
                                  "mean t");
    for (const auto& s : result.summaries) {
        auto frac = [&](std::uint64_t k) {
            return s.trials ? fmt::format("{:.2f}", static_cast<double>(k) / static_cast<double>(s.trials))
                            : std::string("-");
        };
        out += fmt::format("{:>6} {:>22} {:>12.4e} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>10.1f}\n", s.n,
                           s.p_expression, s.p, s.trials, frac(s.free_certified), frac(s.chi_witnessed),
                           frac(s.isolated_witnessed), frac(s.t_certified), s.errors, s.mean_relations);
    }
    out +=
        "note: with the threshold constants (chi > 0 from 3/n^2, an isolated generator up to log(n)/(25 n^2))\n"
        "      the window where both non-freeness and non-(T) witnesses hold is empty unless log n >= 75,\n"
        "      so at these sizes the two witnesses are exercised by separate cells.\n";
    return out;
}

}  // namespace trigroup
