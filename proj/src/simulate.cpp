#include "argosc/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "argosc/rng.hpp"

namespace argosc {

namespace {

std::size_t expected_params(SystemKind system) {
    switch (system) {
        case SystemKind::van_der_pol: return 1;
        case SystemKind::lotka_volterra: return 4;
        case SystemKind::lorenz: return 3;
        case SystemKind::custom: return 0;
    }
    throw std::logic_error("unhandled system kind");
}

std::vector<std::string> param_names(SystemKind system) {
    switch (system) {
        case SystemKind::van_der_pol: return {"mu"};
        case SystemKind::lotka_volterra: return {"a", "b", "c", "d"};
        case SystemKind::lorenz: return {"sigma", "rho", "beta"};
        case SystemKind::custom: return {};
    }
    throw std::logic_error("unhandled system kind");
}

} // namespace

Index BenchmarkConfig::n_states() const {
    switch (system) {
        case SystemKind::van_der_pol:
        case SystemKind::lotka_volterra: return 2;
        case SystemKind::lorenz: return 3;
        case SystemKind::custom: return x0.size();
    }
    throw std::logic_error("unhandled system kind");
}

void BenchmarkConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(train_seconds > 0.0) || !(t_end > train_seconds))
        throw std::invalid_argument("need t_end > train_seconds > 0");
    if (system == SystemKind::custom) {
        if (!rhs) throw std::invalid_argument("custom system needs an rhs function");
        if (x0.size() == 0) throw std::invalid_argument("custom system needs x0");
    } else if (params.size() != expected_params(system)) {
        throw std::invalid_argument(system_name(system) + " expects " +
                                    std::to_string(expected_params(system)) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    if (x0.size() != n_states())
        throw std::invalid_argument("x0 has " + std::to_string(x0.size()) + " entries, expected " +
                                    std::to_string(n_states()));
    if (forcing.kind == ForcingKind::custom && !forcing.fn)
        throw std::invalid_argument("custom forcing needs a function");
    if (forcing.kind == ForcingKind::pi_feedback && n_states() < 2)
        throw std::invalid_argument("pi_feedback forcing needs at least two states");
    const double steps = t_end / dt;
    if (std::abs(steps - std::llround(steps)) > 1e-6)
        throw std::invalid_argument("t_end must be a whole number of dt steps");
}

BenchmarkConfig default_config(SystemKind system) {
    BenchmarkConfig config;
    config.system = system;
    switch (system) {
        case SystemKind::van_der_pol:
            config.params = {1.2};
            config.forcing.kind = ForcingKind::pi_feedback;
            config.forcing.k_p = 1.0;
            config.forcing.k_i = 1.0;
            config.x0 = (Vector(2) << 2.0, 0.0).finished();
            break;
        case SystemKind::lotka_volterra:
            config.params = {8.0, 1.0, 4.0, 1.0};
            config.forcing.kind = ForcingKind::sinusoid;
            config.forcing.k_u = 1.0;
            config.x0 = (Vector(2) << 4.0, 2.0).finished();
            break;
        case SystemKind::lorenz:
            config.params = {10.0, 28.0, 8.0 / 3.0};
            config.forcing.kind = ForcingKind::cos_cubed;
            config.forcing.k_u = 1.0;
            config.x0 = (Vector(3) << -8.0, 7.0, 27.0).finished();
            break;
        case SystemKind::custom:
            throw std::invalid_argument("no defaults for a custom system");
    }
    return config;
}

std::string system_name(SystemKind system) {
    switch (system) {
        case SystemKind::van_der_pol: return "van_der_pol";
        case SystemKind::lotka_volterra: return "lotka_volterra";
        case SystemKind::lorenz: return "lorenz";
        case SystemKind::custom: return "custom";
    }
    throw std::logic_error("unhandled system kind");
}

std::string forcing_name(ForcingKind kind) {
    switch (kind) {
        case ForcingKind::pi_feedback: return "pi_feedback";
        case ForcingKind::sinusoid: return "sinusoid";
        case ForcingKind::cos_cubed: return "cos_cubed";
        case ForcingKind::zero: return "zero";
        case ForcingKind::custom: return "custom";
    }
    throw std::logic_error("unhandled forcing kind");
}

double eval_forcing(const ForcingLaw& law, double t, const Vector& x) {
    switch (law.kind) {
        case ForcingKind::pi_feedback: return -law.k_p * x(0) - law.k_i * x(1);
        case ForcingKind::sinusoid: return law.k_u * std::sin(t);
        case ForcingKind::cos_cubed: {
            const double c = std::cos(t);
            return law.k_u * c * c * c;
        }
        case ForcingKind::zero: return 0.0;
        case ForcingKind::custom: return law.fn(t, x);
    }
    throw std::logic_error("unhandled forcing kind");
}

Vector system_rhs(const BenchmarkConfig& config, double t, const Vector& x, double u) {
    Vector f(x.size());
    switch (config.system) {
        case SystemKind::van_der_pol: {
            const double mu = config.params[0];
            f(0) = x(1);
            f(1) = mu * (1.0 - x(0) * x(0)) * x(1) - x(0) + u;
            return f;
        }
        case SystemKind::lotka_volterra: {
            const double a = config.params[0], b = config.params[1];
            const double c = config.params[2], d = config.params[3];
            f(0) = x(0) * (a - b * x(1)) + u;
            f(1) = -x(1) * (c - d * x(0));
            return f;
        }
        case SystemKind::lorenz: {
            const double sigma = config.params[0], rho = config.params[1];
            const double beta = config.params[2];
            f(0) = sigma * (x(1) - x(0)) + u;
            f(1) = x(0) * (rho - x(2)) - x(1);
            f(2) = x(0) * x(1) - beta * x(2);
            return f;
        }
        case SystemKind::custom: return config.rhs(t, x, u);
    }
    throw std::logic_error("unhandled system kind");
}

TimeSeriesDataset integrate(const BenchmarkConfig& config) {
    config.validate();
    const Index n = static_cast<Index>(std::llround(config.t_end / config.dt)) + 1;
    const Index m = config.n_states();
    const double dt = config.dt;

    TimeSeriesDataset ds;
    ds.t.resize(n);
    ds.truth.resize(n, m);
    ds.U.resize(n, 1);

    auto stage = [&](double t, const Vector& x) {
        return system_rhs(config, t, x, eval_forcing(config.forcing, t, x));
    };

    Vector x = config.x0;
    for (Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        if (!x.allFinite())
            throw std::runtime_error("state diverged to non-finite values at t = " +
                                     std::to_string(t));
        ds.t(i) = t;
        ds.truth.row(i) = x.transpose();
        ds.U(i, 0) = eval_forcing(config.forcing, t, x);
        if (i + 1 == n) break;

        const Vector k1 = stage(t, x);
        const Vector k2 = stage(t + dt / 2.0, x + (dt / 2.0) * k1);
        const Vector k3 = stage(t + dt / 2.0, x + (dt / 2.0) * k2);
        const Vector k4 = stage(t + dt, x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    ds.X = ds.truth;
    ds.meta.system = system_name(config.system);
    ds.meta.forcing = forcing_name(config.forcing.kind);
    ds.meta.seed = config.seed;
    const auto names = param_names(config.system);
    for (std::size_t i = 0; i < names.size(); ++i)
        ds.meta.params.emplace_back(names[i], config.params[i]);
    switch (config.forcing.kind) {
        case ForcingKind::pi_feedback:
            ds.meta.params.emplace_back("k_p", config.forcing.k_p);
            ds.meta.params.emplace_back("k_i", config.forcing.k_i);
            break;
        case ForcingKind::sinusoid:
        case ForcingKind::cos_cubed:
            ds.meta.params.emplace_back("k_u", config.forcing.k_u);
            break;
        default: break;
    }
    for (Index j = 0; j < m; ++j)
        ds.meta.params.emplace_back("x0_" + std::to_string(j + 1), config.x0(j));
    ds.meta.params.emplace_back("train_seconds", config.train_seconds);
    ds.validate();
    return ds;
}

TimeSeriesDataset add_noise(const TimeSeriesDataset& ds, double snr_db, std::uint64_t seed) {
    if (!ds.has_truth()) throw std::invalid_argument("dataset has no truth columns");
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
        throw std::invalid_argument("snr_db must be finite or +inf");

    TimeSeriesDataset out = ds;
    out.meta.snr_db = snr_db;
    out.meta.seed = seed;
    out.X = out.truth;
    if (snr_db == std::numeric_limits<double>::infinity()) return out;

    const Index n = ds.n_samples();
    for (Index j = 0; j < ds.n_states(); ++j) {
        const double power = ds.truth.col(j).squaredNorm() / static_cast<double>(n);
        const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
        RandomStream stream(derive_stream(seed, static_cast<std::uint64_t>(j), kNoiseStream));
        for (Index i = 0; i < n; ++i) out.X(i, j) = ds.truth(i, j) + sigma * stream.gauss();
    }
    return out;
}

std::pair<TimeSeriesDataset, TimeSeriesDataset> split(const TimeSeriesDataset& ds,
                                                      double train_seconds) {
    ds.validate();
    const Index n = ds.n_samples();
    const double span = ds.t(n - 1) - ds.t(0);
    if (!(train_seconds > 0.0) || !(train_seconds < span))
        throw std::invalid_argument("train_seconds must lie strictly inside the trajectory span");

    // Training rows carry 0 < t - t₀ ≤ train_seconds; the boundary sample is
    // kept in training and repeated as the validation start, so 30 s at
    // dt=0.001 with train=10 gives 10,000 + 20,001 samples.
    const Index ib = static_cast<Index>(std::llround(train_seconds / ds.dt()));
    if (ib < 2 || ib > n - 2)
        throw std::invalid_argument("train split leaves too few samples on one side");

    auto slice = [&](Index start, Index count) {
        TimeSeriesDataset part;
        part.t = ds.t.segment(start, count);
        part.X = ds.X.middleRows(start, count);
        part.U = ds.U.middleRows(start, count);
        if (ds.has_truth()) part.truth = ds.truth.middleRows(start, count);
        part.meta = ds.meta;
        return part;
    };
    return {slice(1, ib), slice(ib, n - ib)};
}

} // namespace argosc
