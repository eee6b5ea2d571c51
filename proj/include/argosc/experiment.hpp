#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "argosc/evaluate.hpp"
#include "argosc/pipeline.hpp"
#include "argosc/simulate.hpp"
#include "argosc/sindyc.hpp"

namespace argosc {

// Flat key = value experiment description; see specs/ for the shipped
// defaults. '#' starts a comment, lists are whitespace-separated, unknown
// keys are rejected.
struct ExperimentSpec {
    BenchmarkConfig base; // snr_db ignored; one experiment per snr_list entry
    std::vector<double> snr_list{std::numeric_limits<double>::infinity()};
    std::vector<std::string> methods{"argosc"};
    PipelineConfig pipeline;
    StlsConfig sindyc;
    bool sindyc_tune = true;
    std::vector<double> sindyc_thresholds{0.01, 0.05, 0.1, 0.2, 0.5};
    std::string out_dir = "results";

    RunOptions options() const;
    void validate() const;
};

ExperimentSpec parse_experiment_spec(const std::string& path);

// One run_benchmark per SNR in the spec, in listed order.
std::vector<BenchmarkResult> run_spec(const ExperimentSpec& spec, std::ostream& log);

struct BoundCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Tolerance checks for the named table ("table1" or "table2") evaluated on
// run_spec results.
std::vector<BoundCheck> check_bounds(const std::string& table,
                                     const std::vector<BenchmarkResult>& results);

struct ReproduceOutcome {
    std::vector<BenchmarkResult> results;
    std::vector<BoundCheck> checks;
    std::vector<std::string> files;

    bool all_pass() const;
};

// Command handlers; they throw (std::invalid_argument for bad input,
// std::runtime_error and friends for execution failures) and the CLI maps
// exceptions to exit codes.
void cmd_simulate(const std::string& spec_path, const std::string& out_path, std::ostream& log);

void cmd_fit(const std::string& dataset_path, const std::string& spec_path,
             const std::string& method, std::uint64_t seed, bool seed_set,
             const std::string& model_out, const std::string& trace_out, std::ostream& log);

void cmd_evaluate(const std::string& model_path, const std::string& dataset_path,
                  const std::string& out_path, std::ostream& log);

// table ∈ {table1, table2, all}; runs the shipped spec files from specs_dir,
// writes tables + trajectory overlays + models under out_dir, prints pass/fail
// per tolerance check.
ReproduceOutcome cmd_reproduce(const std::string& table, const std::string& specs_dir,
                               const std::string& out_dir, std::ostream& log);

} // namespace argosc
