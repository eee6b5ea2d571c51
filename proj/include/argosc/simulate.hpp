#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "argosc/dataset.hpp"
#include "argosc/types.hpp"

namespace argosc {

enum class SystemKind { van_der_pol, lotka_volterra, lorenz, custom };
enum class ForcingKind { pi_feedback, sinusoid, cos_cubed, zero, custom };

struct ForcingLaw {
    ForcingKind kind = ForcingKind::zero;
    double k_p = 1.0; // pi_feedback gains
    double k_i = 1.0;
    double k_u = 1.0; // sinusoid / cos_cubed gain
    std::function<double(double, const Vector&)> fn; // custom u(t, x)
};

struct BenchmarkConfig {
    SystemKind system = SystemKind::van_der_pol;
    std::vector<double> params; // μ | a,b,c,d | σ,ρ,β
    ForcingLaw forcing;
    Vector x0;
    double t_end = 30.0;
    double dt = 0.001;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    double train_seconds = 10.0;
    std::function<Vector(double, const Vector&, double)> rhs; // custom f(t, x, u)

    Index n_states() const;
    void validate() const;
};

// Paper parameters, gains, and initial conditions for the three benchmarks.
BenchmarkConfig default_config(SystemKind system);

std::string system_name(SystemKind system);
std::string forcing_name(ForcingKind kind);

double eval_forcing(const ForcingLaw& law, double t, const Vector& x);
Vector system_rhs(const BenchmarkConfig& config, double t, const Vector& x, double u);

// Classical fixed-step RK4 on the sampling grid; X = truth (noise-free).
TimeSeriesDataset integrate(const BenchmarkConfig& config);

// Per-state Gaussian noise with variance mean(truth²)/10^(snr/10); U untouched.
TimeSeriesDataset add_noise(const TimeSeriesDataset& ds, double snr_db, std::uint64_t seed);

// Training part holds samples with 0 < t - t₀ ≤ train_seconds, validation
// starts at the boundary sample (shared), so 30 s at dt=0.001 with a 10 s
// split yields 10,000 + 20,001 rows.
std::pair<TimeSeriesDataset, TimeSeriesDataset> split(const TimeSeriesDataset& ds,
                                                      double train_seconds);

} // namespace argosc
