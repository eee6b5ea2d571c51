#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "argosc/types.hpp"

namespace argosc {

// Provenance of a generated dataset; carried through noise injection and
// splitting, persisted as '#' comment lines in the dataset file.
struct DatasetMeta {
    std::string system;
    std::string forcing;
    std::vector<std::pair<std::string, double>> params;
    double snr_db = std::numeric_limits<double>::infinity(); // +inf = noise-free
    std::uint64_t seed = 0;
};

// One sampled trajectory: uniform time grid, states, forcing inputs, and the
// noise-free states when known.
struct TimeSeriesDataset {
    Vector t;     // n, strictly increasing, uniform spacing
    Matrix X;     // n x m observed states
    Matrix U;     // n x r forcing inputs (never noised)
    Matrix truth; // n x m noise-free states, or 0 x 0 when unknown
    DatasetMeta meta;

    Index n_samples() const { return t.size(); }
    Index n_states() const { return X.cols(); }
    Index n_inputs() const { return U.cols(); }
    bool has_truth() const { return truth.rows() == t.size() && truth.cols() == X.cols(); }
    double dt() const { return t.size() >= 2 ? t(1) - t(0) : 0.0; }

    // Throws std::invalid_argument on any invariant violation: n < 2, shape
    // mismatch, non-uniform grid (relative tolerance 1e-9), non-finite entry.
    void validate() const;
};

void save_dataset(const TimeSeriesDataset& ds, const std::string& path);
TimeSeriesDataset load_dataset(const std::string& path);

} // namespace argosc
