#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "argosc/term.hpp"
#include "argosc/types.hpp"

namespace argosc {

// One retained term of a fitted equation. Confidence bounds are NaN when the
// fitting method does not produce them (plain thresholded least squares).
struct Coefficient {
    TermDescriptor term;
    double value = 0.0;
    double ci_lower = std::numeric_limits<double>::quiet_NaN();
    double ci_upper = std::numeric_limits<double>::quiet_NaN();
    int retained_count = 0; // bootstrap replicates in which the term was selected

    bool has_ci() const { return std::isfinite(ci_lower) && std::isfinite(ci_upper); }
};

struct StateDiagnostics {
    double lambda_star = 0.0; // CV-selected penalty on the trimmed library
    double eta = 0.0;         // threshold picked by BIC
    int eta_index = -1;
    double bic = 0.0;
    int bootstrap_samples = 0;
    int trimmed_degree = 0;
};

// Identified dynamics: one sparse equation per state, terms sorted in library
// column order. States with empty equations keep their diagnostics.
struct SparseModel {
    Index m = 0; // number of states
    Index r = 0; // number of inputs seen by the candidate library
    std::vector<std::vector<Coefficient>> states;
    std::vector<StateDiagnostics> diagnostics;

    // dx_j/dt at one sample point; x has m entries, u has r entries.
    double eval_rhs(Index state, const Vector& x, const Vector& u) const;
};

// Human-readable equations, one line per state, deterministic.
// names must have m + r entries.
std::string render_model(const SparseModel& model, const std::vector<std::string>& names);

void save_model(const SparseModel& model, const std::string& path);
SparseModel load_model(const std::string& path);

} // namespace argosc
