#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "argosc/dataset.hpp"
#include "argosc/features.hpp"
#include "argosc/model.hpp"
#include "argosc/savgol.hpp"
#include "argosc/types.hpp"

namespace argosc {

enum class PenaltyKind { lasso, adaptive_lasso };

struct PipelineConfig {
    int degree = 5;
    PenaltyKind penalty = PenaltyKind::adaptive_lasso;
    Vector eta_grid;            // empty → default_eta_grid()
    int bootstrap_samples = 2000;
    double alpha = 0.05;
    SGParams sg;
    std::uint64_t seed = 0;
    bool include_control = true; // false drops U from the library entirely
    std::vector<CustomTerm> custom;
    int cv_folds = 10;

    void validate() const;
};

// 10⁻⁸, 10⁻⁷, …, 10¹ — ten threshold decades, ascending.
Vector default_eta_grid();

double bic(double rss, Index n, Index k);

struct EtaRecord {
    double eta = 0.0;
    std::vector<Index> support; // column indices into the trimmed library
    Vector coefs;               // OLS on the support, compact
    double bic = 0.0;
};

struct StateTrace {
    std::vector<Index> support0;  // initial penalized selection, full-library indices
    int trimmed_degree = 1;
    std::vector<TermDescriptor> trimmed_terms;
    double lambda_star0 = 0.0;    // CV choice on the full library
    double lambda_star = 0.0;     // CV choice on the trimmed library
    Vector beta1;                 // trimmed-library penalized fit, original scale
    std::vector<EtaRecord> eta_records;
    Index chosen_eta = -1;
    std::vector<int> retained_count; // bootstrap retention per trimmed column
};

struct SelectionTrace {
    std::vector<TermDescriptor> library; // full initial library
    std::vector<StateTrace> states;
};

struct ArgoscFit {
    SparseModel model;
    SelectionTrace trace;
};

struct TermCi {
    double lower = 0.0;
    double upper = 0.0;
    int retained = 0; // replicates where the term was selected
};

// 1-based order-statistic ranks: lo = ⌊Bα/2⌋ (≥1), up = B − lo + 1.
std::pair<int, int> bootstrap_order_ranks(int B, double alpha);

// Runs fit on B with-replacement row resamples (stream per replicate derived
// from the seed) and reads the percentile interval off the sorted estimates;
// unselected terms contribute zeros.
std::vector<TermCi> bootstrap_ci(const std::function<Vector(const std::vector<Index>&)>& fit,
                                 Index n_rows, Index n_terms, int B, double alpha,
                                 std::uint64_t seed);

ArgoscFit fit_argosc(const TimeSeriesDataset& ds, const PipelineConfig& cfg);

void save_trace(const SelectionTrace& trace, const std::string& path);

} // namespace argosc
