#pragma once

#include <utility>
#include <vector>

#include "argosc/types.hpp"

namespace argosc {

struct OlsResult {
    Vector beta;
    double rss = 0.0;
};

// Minimum-norm least squares; rank deficiency resolved deterministically.
OlsResult ols(const Matrix& A, const Vector& y);

// ‖y − Aβ‖² + lambda_r·‖β‖² with constant columns left unpenalized.
Vector ridge(const Matrix& A, const Vector& y, double lambda_r);

struct PenaltyWeights {
    Vector w; // non-negative; +inf freezes a column at zero
    static PenaltyWeights uniform(Index p) { return {Vector::Ones(p)}; }
    void validate(Index p) const;
};

Vector adaptive_weights(const Vector& beta_ridge, double eps = 1e-9);

struct LassoOptions {
    double tol = 1e-9;      // max coefficient change per sweep
    long max_sweeps = 100000;
    // Near-duplicate columns can pin the per-sweep change just above tol while
    // the iterate is already optimal to round-off; sweeps whose change falls
    // below stall_tol accept on a KKT check at stall_kkt relative slack.
    double stall_tol = 1e-6;
    double stall_kkt = 1e-4;
};

// Sufficient statistics for the squared loss: everything the coordinate
// descent, ridge, and OLS steps need, at O(p²) per evaluation instead of
// O(np). gram = AᵀA/n, corr = Aᵀy/n, y_sq = yᵀy/n.
struct GramProblem {
    Matrix gram;
    Vector corr;
    double y_sq = 0.0;
    Index n = 0;
    Index p() const { return gram.rows(); }
};

GramProblem make_gram(const Matrix& A, const Vector& y);

// Contiguous [start, count) blocks: serial dependence makes shuffled folds
// leak across the train/test boundary.
std::vector<std::pair<Index, Index>> fold_blocks(Index n, int folds);

struct CvGram {
    GramProblem full;
    std::vector<GramProblem> test;  // per held-out block
    std::vector<GramProblem> train; // complements
};

CvGram make_cv_gram(const Matrix& A, const Vector& y, int folds);

// Gram of the rows of `full` that are not in `part`.
GramProblem gram_complement(const GramProblem& full, const GramProblem& part);

// Cyclic coordinate descent on (1/(2n))‖y−Aβ‖² + λ·Σ wₖ|βₖ|, warm-started
// from beta when non-empty. Active-set sweeps between full passes.
Vector lasso_cd_gram(const GramProblem& g, double lambda, const Vector& w, Vector beta,
                     const LassoOptions& opts = {});

Vector lasso_cd(const Matrix& A, const Vector& y, double lambda, const PenaltyWeights& w,
                const Vector* warm_start = nullptr, const LassoOptions& opts = {});

double lasso_objective(const GramProblem& g, const Vector& beta, double lambda, const Vector& w);

// 100 log-spaced values from the smallest λ that zeroes every penalized
// coefficient down to ratio times it.
Vector default_lambda_grid(const GramProblem& g, const Vector& w, int count = 100,
                           double ratio = 1e-4);
Vector default_lambda_grid(const Matrix& A, const Vector& y, const PenaltyWeights& w,
                           int count = 100, double ratio = 1e-4);

struct LassoPath {
    Vector lambdas;    // strictly descending
    Matrix coefs;      // p × |lambdas|, full-data fits
    Vector cv_mse;     // out-of-fold MSE mean per λ
    Vector cv_se;      // standard error of the fold MSEs
    double lambda_star = 0.0;
    Index star_index = -1;
};

// full_coefs=false stops the full-data path at λ* (columns past it stay 0) —
// the fold statistics and selection are unaffected.
LassoPath cv_lasso_path(const CvGram& cv, const Vector& w, const Vector& lambda_grid,
                        const LassoOptions& opts = {}, bool full_coefs = true);

LassoPath cv_select_lambda(const Matrix& A, const Vector& y, const PenaltyWeights& w,
                           int folds, const Vector& lambda_grid, const LassoOptions& opts = {});

// (n·G + λᵣI) β = n·corr — the ridge solution in Gram form, all columns penalized.
Vector ridge_gram(const GramProblem& g, double lambda_r);

// λᵣ = n·10^s for s ∈ [-8, 2], 41 values ascending.
Vector default_ridge_grid(Index n);

struct RidgeSelection {
    Vector grid;
    Vector cv_mse;
    double lambda_star = 0.0;
    Index star_index = -1;
};

RidgeSelection cv_select_ridge(const CvGram& cv, const Vector& grid);

// Minimum-norm OLS restricted to `support` columns, solved on a
// Jacobi-equilibrated Gram with a 1e-12 relative eigenvalue cut.
OlsResult ols_gram(const GramProblem& g, const std::vector<Index>& support);

struct KktReport {
    double worst_active = 0.0;   // max | |gradₖ| − λwₖ | over βₖ ≠ 0
    double worst_inactive = 0.0; // max ( |gradₖ| − λwₖ )⁺ over βₖ = 0
    bool ok(double tol) const { return worst_active <= tol && worst_inactive <= tol; }
};

KktReport kkt_check(const GramProblem& g, const Vector& beta, double lambda, const Vector& w);
KktReport kkt_check(const Matrix& A, const Vector& y, const Vector& beta, double lambda,
                    const Vector& w);

} // namespace argosc
