#pragma once

#include <utility>
#include <vector>

#include "argosc/dataset.hpp"
#include "argosc/features.hpp"
#include "argosc/model.hpp"
#include "argosc/savgol.hpp"
#include "argosc/types.hpp"

namespace argosc {

enum class DiffMethod { sg, central_difference };

struct StlsConfig {
    double threshold = 0.1;
    int max_iter = 20;
    int degree = 5;
    DiffMethod differentiation = DiffMethod::sg;
    SGParams sg;
    bool include_control = true;
    std::vector<CustomTerm> custom;

    void validate() const;
};

// Sequential thresholded least squares: OLS, zero |βₖ| < threshold, re-OLS on
// the survivors until the support stops changing. Columns never re-enter, so
// the support shrinks monotonically.
std::pair<Vector, std::vector<Index>> stls(const Matrix& A, const Vector& y, double threshold,
                                           int max_iter);

SparseModel fit_sindyc(const TimeSeriesDataset& ds, const StlsConfig& cfg);

// (x_{i+1} − x_{i−1}) / 2dt interior, one-sided at the ends.
Matrix central_difference(const Matrix& X, double dt);

} // namespace argosc
