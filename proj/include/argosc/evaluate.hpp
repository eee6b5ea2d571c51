#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "argosc/dataset.hpp"
#include "argosc/model.hpp"
#include "argosc/pipeline.hpp"
#include "argosc/simulate.hpp"
#include "argosc/sindyc.hpp"
#include "argosc/types.hpp"

namespace argosc {

struct SimulationResult {
    Matrix X;            // n × m; rows past valid_rows are NaN
    Vector t;
    Index valid_rows = 0;
    double divergence_time = std::numeric_limits<double>::quiet_NaN();

    bool diverged() const { return valid_rows < t.size(); }
};

// RK4 on the identified right-hand side. u(t) is interpolated linearly between
// the supplied samples at interior stage times. Integration stops once any
// |state| exceeds bound (or goes non-finite); divergence_time records the first
// offending time.
SimulationResult simulate_model(const SparseModel& model, const Vector& x0, const Vector& t,
                                const Matrix& U, double bound = 1e6);

// Same, but u is recomputed from the *predicted* state at every stage through
// the feedback law, as in closed-loop deployment. Requires model.r == 1.
SimulationResult simulate_model_closed_loop(const SparseModel& model, const Vector& x0,
                                            const Vector& t, const ForcingLaw& law,
                                            double bound = 1e6);

struct StateScore {
    double mse = std::numeric_limits<double>::infinity();
    double r2 = -std::numeric_limits<double>::infinity();
};

struct EvalReport {
    std::vector<StateScore> states;
    double horizon = 0.0; // seconds actually simulated
    double divergence_time = std::numeric_limits<double>::quiet_NaN();
    bool diverged = false;

    double mean_mse() const;
    double min_r2() const;
};

// Metrics against noise-free truth on the same grid. Sums run over the valid
// prefix of the simulation; the centering mean x̄ is taken over the full
// window. SST ≤ 0 degenerates to r2 = 1 when SSE = 0, -inf otherwise.
EvalReport score(const Matrix& truth, const SimulationResult& sim);

struct RunOptions {
    bool run_argosc = true;
    bool run_sindyc = false;
    bool run_argos_ablation = false; // ARGOSc with the control columns excluded
    PipelineConfig pipeline;
    StlsConfig sindyc;
    bool tune_sindyc = true;
    std::vector<double> sindyc_thresholds = {0.01, 0.05, 0.1, 0.2, 0.5};
};

struct MethodResult {
    std::string method; // "argosc" | "sindyc" | "argos"
    SparseModel model;
    EvalReport report;
    SimulationResult simulation;
    SelectionTrace trace; // argosc/argos only
    bool has_trace = false;
    double fit_seconds = 0.0;
    double tuned_threshold = std::numeric_limits<double>::quiet_NaN();
};

struct BenchmarkResult {
    std::string system;
    std::string forcing;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    TimeSeriesDataset val; // validation slice incl. noise-free truth
    std::vector<MethodResult> methods;
};

// simulate → noise → split → fit each requested method on the training slice →
// simulate from the true state at the split boundary over the validation
// horizon → score. Feedback-forced systems are validated closed-loop.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg, const RunOptions& opts);

// Delimited text, one row per (system, SNR, method, state):
// system,method,snr_db,state,mse,r2
void write_table(const std::string& path, const std::vector<BenchmarkResult>& results);

// t, truth, and per-method predictions over the validation window.
void write_trajectories(const std::string& path, const BenchmarkResult& result);

} // namespace argosc
