// Command-line front end: sample, certify, spectrum, sweep.
//
// Exit codes: 0 success, 1 usage or malformed input, 2 I/O error,
// 3 solver failure in single-shot mode.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "trigroup/harness.hpp"
#include "trigroup/linkgraph.hpp"
#include "trigroup/spectra.hpp"
#include "trigroup/words.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kSolver = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError(fmt::format("error while reading '{}'", path));
    return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content << std::flush;
        if (!std::cout) throw IoError("error writing to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
    out << content;
    out.flush();
    if (!out) throw IoError(fmt::format("error while writing '{}'", path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random triangular group presentations: sampling, freeness and property (T) certificates"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "Sample a presentation from the binomial or uniform model");
    std::uint32_t sample_n = 0;
    double sample_p = -1.0;
    std::uint64_t sample_t = 0;
    std::uint64_t sample_seed = 0;
    std::string sample_out;
    sample->add_option("-n,--generators", sample_n, "Number of generators")->required()->check(CLI::PositiveNumber);
    auto* p_opt = sample->add_option("-p,--probability", sample_p, "Binomial model: keep each word with probability p");
    auto* t_opt = sample->add_option("-t,--relations", sample_t, "Uniform model: exactly t relations");
    p_opt->excludes(t_opt);
    sample->add_option("-s,--seed", sample_seed, "64-bit seed")->required();
    sample->add_option("-o,--output", sample_out, "Output file (default stdout)");

    // certify
    auto* certify = app.add_subcommand("certify", "Run every certifier on a presentation file");
    std::string certify_in;
    std::string certify_format = "both";
    bool certify_no_spectra = false;
    double certify_tol = 1e-10;
    certify->add_option("file", certify_in, "Presentation file")->required();
    certify->add_option("--format", certify_format, "text, json or both")
        ->check(CLI::IsMember({"text", "json", "both"}));
    certify->add_flag("--no-spectra", certify_no_spectra, "Skip the spectral certificate");
    certify->add_option("--tol", certify_tol, "Eigensolver tolerance")->check(CLI::PositiveNumber);

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Normalized Laplacian spectrum of the link graph as CSV");
    std::string spectrum_in;
    std::string spectrum_out;
    double spectrum_tol = 1e-10;
    spectrum->add_option("file", spectrum_in, "Presentation file")->required();
    spectrum->add_option("-o,--output", spectrum_out, "Output CSV (default stdout)");
    spectrum->add_option("--tol", spectrum_tol, "Eigensolver tolerance")->check(CLI::PositiveNumber);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a seeded Monte Carlo sweep over an (n, p) grid");
    std::string sweep_config_path;
    std::string sweep_out;
    unsigned sweep_threads = 0;
    sweep->add_option("config", sweep_config_path, "Sweep config file (key = value)")->required();
    sweep->add_option("-o,--output", sweep_out, "Override the CSV output path");
    sweep->add_option("-j,--threads", sweep_threads, "Override the worker thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*sample) {
            if (p_opt->count() == 0 && t_opt->count() == 0) {
                std::cerr << "sample: one of --probability or --relations is required\n";
                return kUsage;
            }
            const auto presentation = p_opt->count() > 0
                                          ? trigroup::sample_binomial(sample_n, sample_p, sample_seed)
                                          : trigroup::sample_uniform(sample_n, sample_t, sample_seed);
            write_output(sample_out, trigroup::serialize_presentation(presentation));
        } else if (*certify) {
            const auto presentation = trigroup::parse_presentation(read_file(certify_in));
            trigroup::TrialOptions options;
            options.run_spectra = !certify_no_spectra;
            options.tol = certify_tol;
            options.record_timing = true;
            const auto verdict = trigroup::classify_trial(presentation, options);
            if (certify_format != "json") std::cout << trigroup::verdict_to_text(verdict);
            if (certify_format != "text") std::cout << trigroup::verdict_to_json(verdict) << '\n';
            if (verdict.error) return kSolver;
        } else if (*spectrum) {
            const auto presentation = trigroup::parse_presentation(read_file(spectrum_in));
            const auto report = trigroup::spectral_gap(trigroup::build_link_graph(presentation),
                                                       {spectrum_tol, true});
            write_output(spectrum_out, trigroup::spectrum_csv(report, spectrum_tol));
        } else if (*sweep) {
            auto config = trigroup::parse_sweep_config(read_file(sweep_config_path));
            if (!sweep_out.empty()) config.output = sweep_out;
            if (sweep_threads > 0) config.threads = sweep_threads;
            const auto result = trigroup::run_sweep(config);
            write_output(config.output, trigroup::sweep_csv(result));
            std::cerr << trigroup::sweep_summary(result);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const trigroup::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
