#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trigroup/freeness.hpp"
#include "trigroup/words.hpp"

namespace trigroup {

/// Density exponent d with t = n^(3d): ln t / (3 ln n). -inf for t = 0,
/// NaN for n = 1.
double presentation_density(std::uint32_t n, std::size_t t);

/// Euler characteristic 1 - n + t of the presentation complex. A positive
/// value witnesses non-freeness provided the complex is aspherical, which
/// is only known to hold (asymptotically) for density below 1/2.
struct EulerWitness {
    static constexpr std::string_view kAssumes = "aspherical-presentation-complex(density<1/2)";

    std::int64_t chi = 0;
    bool witness = false;           ///< chi > 0
    double density = 0.0;
    bool assumption_in_range = false;  ///< density < 1/2
};

EulerWitness euler_characteristic(const Presentation& presentation);

/// Generators s such that neither s nor s^-1 occurs in any relation. Any
/// such s splits the group as a free product with Z, ruling out property
/// (T) as long as the remaining generators are nontrivial, which is only
/// known (asymptotically) for density below 4/9.
struct IsolatedWitness {
    static constexpr std::string_view kAssumes = "nontrivial-generators(density<4/9)";

    std::vector<Generator> generators;
    bool witness = false;
    double density = 0.0;
    bool assumption_in_range = false;  ///< density < 4/9
};

IsolatedWitness find_isolated_generators(const Presentation& presentation);

enum class TStatus { Certified, Inconclusive, Skipped };

struct TrialOptions {
    bool run_spectra = true;
    double tol = 1e-10;
    double margin = 1e-8;
    bool record_timing = false;
};

struct TrialVerdict {
    std::uint32_t n = 0;
    std::size_t t = 0;

    std::optional<FreenessCertificate> free_certificate;  ///< present iff freeness certified
    std::vector<RelationId> stuck_residual;
    EulerWitness euler;
    IsolatedWitness isolated;

    TStatus t_status = TStatus::Skipped;
    bool connected = false;
    double lambda2 = 0.0;  ///< NaN when spectra were skipped or failed

    std::size_t max_h_component = 0;
    double degree_deviation = 0.0;
    double elapsed_ms = 0.0;
    std::optional<std::string> error;  ///< solver failure, if any

    bool free_certified() const noexcept { return free_certificate.has_value(); }
};

/// Two certifiers contradicted each other; always a bug.
class VerdictConflict : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Runs greedy elimination, both witnesses and the spectral certificate.
/// Solver failures land in `error`; conflicting verdicts throw
/// VerdictConflict.
TrialVerdict classify_trial(const Presentation& presentation, const TrialOptions& options = {});

std::string_view to_string(TStatus status) noexcept;

/// Human-readable multi-line report.
std::string verdict_to_text(const TrialVerdict& verdict);
/// Single-line JSON record.
std::string verdict_to_json(const TrialVerdict& verdict);

/// Edge probability as a function of n: `<c>/n^2`, `<c>*log(n)/n^2`
/// (natural log) or `abs:<p>`.
class PExpression {
public:
    enum class Shape { OverNSquared, LogOverNSquared, Absolute };

    /// Throws std::invalid_argument on anything outside the three shapes.
    static PExpression parse(std::string_view text);

    double evaluate(std::uint32_t n) const;
    Shape shape() const noexcept { return shape_; }
    double coefficient() const noexcept { return coefficient_; }
    const std::string& text() const noexcept { return text_; }

private:
    Shape shape_ = Shape::Absolute;
    double coefficient_ = 0.0;
    std::string text_;
};

struct SweepCell {
    std::uint32_t n = 1;
    PExpression p;
    std::uint64_t trials = 0;
    bool spectra = true;
};

struct SweepConfig {
    std::vector<SweepCell> grid;
    std::uint64_t master_seed = 1;
    double tol = 1e-10;
    double margin = 1e-8;
    unsigned threads = 1;
    bool record_timing = false;
    std::string output;  ///< CSV path; empty means stdout for the CLI

    /// Throws std::invalid_argument when some cell's p leaves [0, 1].
    void validate() const;
};

/// Flat `key = value` lines; `#` comments. Repeated `cell = n=<int>
/// p=<expr> trials=<int> [spectra=on|off]` lines build the grid.
SweepConfig parse_sweep_config(std::string_view text);

struct SweepRow {
    std::size_t cell = 0;
    std::uint64_t trial = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    TrialVerdict verdict;
    double wall_ms = 0.0;  ///< sampling plus classification; never written to the CSV
};

struct CellSummary {
    std::uint32_t n = 0;
    std::string p_expression;
    double p = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t free_certified = 0;
    std::uint64_t chi_witnessed = 0;
    std::uint64_t isolated_witnessed = 0;
    std::uint64_t t_certified = 0;
    std::uint64_t connected = 0;
    std::uint64_t errors = 0;
    double mean_relations = 0.0;
    double wall_ms = 0.0;  ///< summed over the cell's trials
};

struct SweepResult {
    std::vector<SweepRow> rows;  ///< ordered by (cell, trial)
    std::vector<CellSummary> summaries;
};

/// Deterministic in the config: each trial is seeded by
/// trial_seed(master_seed, cell, trial) and rows keep (cell, trial) order
/// whatever the thread count.
SweepResult run_sweep(const SweepConfig& config);

inline constexpr std::string_view kCsvHeader =
    "n,p,seed,trial,t,free_cert,rank,chi,chi_witness,isolated_count,connected,lambda2,t_cert,"
    "max_h_component,degree_dev,error,elapsed_ms";

std::string csv_row(const SweepRow& row);
std::string sweep_csv(const SweepResult& result);
std::string sweep_summary(const SweepResult& result);

}  // namespace trigroup
