#include "argosc/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace argosc {

namespace {

bool state_ok(const Vector& x, double bound) {
    if (!x.allFinite()) return false;
    return x.cwiseAbs().maxCoeff() <= bound;
}

Vector model_rhs(const SparseModel& model, const Vector& x, const Vector& u) {
    Vector dx(model.m);
    for (Index s = 0; s < model.m; ++s) dx(s) = model.eval_rhs(s, x, u);
    return dx;
}

// Shared RK4 driver; u_at(stage_time, stage_state) supplies the forcing.
template <typename ForcingAt>
SimulationResult rk4_drive(const SparseModel& model, const Vector& x0, const Vector& t,
                           double bound, ForcingAt&& u_at) {
    if (x0.size() != model.m) throw std::invalid_argument("simulate_model: x0 size mismatch");
    if (t.size() < 1) throw std::invalid_argument("simulate_model: empty time grid");
    if (!(bound > 0.0)) throw std::invalid_argument("simulate_model: bound must be positive");

    const Index n = t.size();
    SimulationResult out;
    out.t = t;
    out.X = Matrix::Constant(n, model.m, std::numeric_limits<double>::quiet_NaN());

    Vector x = x0;
    if (!state_ok(x, bound)) {
        out.valid_rows = 0;
        out.divergence_time = t(0);
        return out;
    }
    out.X.row(0) = x;
    out.valid_rows = 1;

    for (Index i = 0; i + 1 < n; ++i) {
        const double h = t(i + 1) - t(i);
        const double tm = t(i) + 0.5 * h;

        const Vector k1 = model_rhs(model, x, u_at(i, 0, t(i), x));
        const Vector x2 = x + 0.5 * h * k1;
        const Vector k2 = model_rhs(model, x2, u_at(i, 1, tm, x2));
        const Vector x3 = x + 0.5 * h * k2;
        const Vector k3 = model_rhs(model, x3, u_at(i, 2, tm, x3));
        const Vector x4 = x + h * k3;
        const Vector k4 = model_rhs(model, x4, u_at(i, 3, t(i + 1), x4));

        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!state_ok(x, bound)) {
            out.divergence_time = t(i + 1);
            return out;
        }
        out.X.row(i + 1) = x;
        out.valid_rows = i + 2;
    }
    return out;
}

} // namespace

SimulationResult simulate_model(const SparseModel& model, const Vector& x0, const Vector& t,
                                const Matrix& U, double bound) {
    if (U.rows() != t.size()) throw std::invalid_argument("simulate_model: U rows must match t");
    if (U.cols() != model.r) throw std::invalid_argument("simulate_model: U columns must match model inputs");

    // stage 0 → u_i, stages 1/2 → midpoint interpolation, stage 3 → u_{i+1}
    auto u_at = [&](Index i, int stage, double, const Vector&) -> Vector {
        if (model.r == 0) return Vector(0);
        if (stage == 0) return U.row(i).transpose();
        if (stage == 3) return U.row(i + 1).transpose();
        return 0.5 * (U.row(i) + U.row(i + 1)).transpose();
    };
    return rk4_drive(model, x0, t, bound, u_at);
}

SimulationResult simulate_model_closed_loop(const SparseModel& model, const Vector& x0,
                                            const Vector& t, const ForcingLaw& law,
                                            double bound) {
    if (model.r != 1)
        throw std::invalid_argument("simulate_model_closed_loop: model must take one input");
    auto u_at = [&](Index, int, double time, const Vector& x_stage) -> Vector {
        Vector u(1);
        u(0) = eval_forcing(law, time, x_stage);
        return u;
    };
    return rk4_drive(model, x0, t, bound, u_at);
}

double EvalReport::mean_mse() const {
    if (states.empty()) return std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (const auto& st : states) s += st.mse;
    return s / static_cast<double>(states.size());
}

double EvalReport::min_r2() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& st : states) r = std::min(r, st.r2);
    return states.empty() ? -std::numeric_limits<double>::infinity() : r;
}

EvalReport score(const Matrix& truth, const SimulationResult& sim) {
    if (truth.rows() != sim.t.size())
        throw std::invalid_argument("score: truth rows must match the simulation grid");
    if (truth.cols() != sim.X.cols())
        throw std::invalid_argument("score: state count mismatch");

    const Index m = truth.cols();
    const Index valid = sim.valid_rows;

    EvalReport rep;
    rep.diverged = sim.diverged();
    rep.divergence_time = sim.divergence_time;
    rep.horizon = valid > 0 ? sim.t(valid - 1) - sim.t(0) : 0.0;
    rep.states.resize(static_cast<std::size_t>(m));

    for (Index j = 0; j < m; ++j) {
        auto& st = rep.states[static_cast<std::size_t>(j)];
        if (valid == 0) continue; // keeps the {inf, -inf} defaults
        const double xbar = truth.col(j).mean(); // centering over the full window
        const auto pred = sim.X.col(j).head(valid);
        const auto ref = truth.col(j).head(valid);
        const double sse = (pred - ref).squaredNorm();
        const double sst = (ref.array() - xbar).matrix().squaredNorm();
        st.mse = sse / static_cast<double>(valid);
        if (sst > 0.0)
            st.r2 = 1.0 - sse / sst;
        else
            st.r2 = sse == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    }
    return rep;
}

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg, const RunOptions& opts) {
    cfg.validate();

    const TimeSeriesDataset clean = integrate(cfg);
    const TimeSeriesDataset noisy = add_noise(clean, cfg.snr_db, cfg.seed);
    auto [train, val] = split(noisy, cfg.train_seconds);

    BenchmarkResult out;
    out.system = system_name(cfg.system);
    out.forcing = forcing_name(cfg.forcing.kind);
    out.snr_db = cfg.snr_db;
    out.seed = cfg.seed;

    const Vector x0 = val.truth.row(0).transpose();
    const bool feedback = cfg.forcing.kind == ForcingKind::pi_feedback;

    auto validate_model = [&](const SparseModel& mdl) {
        if (mdl.r > 0 && feedback)
            return simulate_model_closed_loop(mdl, x0, val.t, cfg.forcing);
        const Matrix U = mdl.r > 0 ? val.U : Matrix(val.n_samples(), 0);
        return simulate_model(mdl, x0, val.t, U);
    };

    if (opts.run_argosc) {
        PipelineConfig pc = opts.pipeline;
        pc.include_control = true;
        const auto start = std::chrono::steady_clock::now();
        ArgoscFit fit = fit_argosc(train, pc);
        MethodResult mr;
        mr.method = "argosc";
        mr.fit_seconds = elapsed_seconds(start);
        mr.model = std::move(fit.model);
        mr.trace = std::move(fit.trace);
        mr.has_trace = true;
        mr.simulation = validate_model(mr.model);
        mr.report = score(val.truth, mr.simulation);
        out.methods.push_back(std::move(mr));
    }

    if (opts.run_sindyc) {
        std::vector<double> grid =
            opts.tune_sindyc ? opts.sindyc_thresholds : std::vector<double>{opts.sindyc.threshold};
        if (grid.empty()) throw std::invalid_argument("run_benchmark: empty threshold grid");
        std::sort(grid.begin(), grid.end()); // ascending, so ties keep the smallest

        const auto start = std::chrono::steady_clock::now();
        MethodResult best;
        bool have = false;
        for (double th : grid) {
            StlsConfig sc = opts.sindyc;
            sc.threshold = th;
            MethodResult mr;
            mr.method = "sindyc";
            mr.model = fit_sindyc(train, sc);
            mr.simulation = validate_model(mr.model);
            mr.report = score(val.truth, mr.simulation);
            mr.tuned_threshold = th;
            const auto key = std::make_pair(mr.report.diverged, mr.report.mean_mse());
            const auto best_key = have ? std::make_pair(best.report.diverged, best.report.mean_mse())
                                       : std::make_pair(true, std::numeric_limits<double>::infinity());
            if (!have || key < best_key) {
                best = std::move(mr);
                have = true;
            }
        }
        best.fit_seconds = elapsed_seconds(start);
        out.methods.push_back(std::move(best));
    }

    if (opts.run_argos_ablation) {
        PipelineConfig pc = opts.pipeline;
        pc.include_control = false;
        const auto start = std::chrono::steady_clock::now();
        ArgoscFit fit = fit_argosc(train, pc);
        MethodResult mr;
        mr.method = "argos";
        mr.fit_seconds = elapsed_seconds(start);
        mr.model = std::move(fit.model);
        mr.trace = std::move(fit.trace);
        mr.has_trace = true;
        mr.simulation = validate_model(mr.model);
        mr.report = score(val.truth, mr.simulation);
        out.methods.push_back(std::move(mr));
    }

    out.val = std::move(val);
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

void write_table(const std::string& path, const std::vector<BenchmarkResult>& results) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_table: cannot open " + path);
    out << "system,method,snr_db,state,mse,r2\n";
    for (const auto& res : results) {
        for (const auto& mr : res.methods) {
            for (std::size_t j = 0; j < mr.report.states.size(); ++j) {
                const auto& st = mr.report.states[j];
                out << res.system << ',' << mr.method << ',' << fmt(res.snr_db) << ",x" << (j + 1)
                    << ',' << fmt(st.mse) << ',' << fmt(st.r2) << '\n';
            }
        }
    }
    if (!out) throw std::runtime_error("write_table: write failed: " + path);
}

void write_trajectories(const std::string& path, const BenchmarkResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trajectories: cannot open " + path);
    const Index n = result.val.n_samples();
    const Index m = result.val.n_states();

    out << "t";
    for (Index j = 0; j < m; ++j) out << ",true_x" << (j + 1);
    for (const auto& mr : result.methods)
        for (Index j = 0; j < m; ++j) out << ',' << mr.method << "_x" << (j + 1);
    out << '\n';

    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        out << buf;
    };
    for (Index i = 0; i < n; ++i) {
        put(result.val.t(i));
        for (Index j = 0; j < m; ++j) {
            out << ',';
            put(result.val.truth(i, j));
        }
        for (const auto& mr : result.methods)
            for (Index j = 0; j < m; ++j) {
                out << ',';
                put(mr.simulation.X(i, j));
            }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_trajectories: write failed: " + path);
}

} // namespace argosc
