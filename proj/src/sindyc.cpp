#include "argosc/sindyc.hpp"

#include <cmath>
#include <stdexcept>

#include "argosc/regression.hpp"

namespace argosc {

void StlsConfig::validate() const {
    if (!(threshold > 0.0)) throw std::invalid_argument("stls: threshold must be positive");
    if (max_iter < 1) throw std::invalid_argument("stls: max_iter must be >= 1");
    if (degree < 1) throw std::invalid_argument("stls: degree must be >= 1");
}

std::pair<Vector, std::vector<Index>> stls(const Matrix& A, const Vector& y, double threshold,
                                           int max_iter) {
    if (!(threshold > 0.0)) throw std::invalid_argument("stls: threshold must be positive");
    if (A.rows() != y.size()) throw std::invalid_argument("stls: row mismatch");

    const Index p = A.cols();
    std::vector<Index> support(static_cast<std::size_t>(p));
    for (Index k = 0; k < p; ++k) support[static_cast<std::size_t>(k)] = k;

    Vector beta = Vector::Zero(p);
    for (int iter = 0; iter < max_iter; ++iter) {
        Matrix As(A.rows(), static_cast<Index>(support.size()));
        for (std::size_t j = 0; j < support.size(); ++j) As.col(static_cast<Index>(j)) = A.col(support[j]);
        const OlsResult fit = ols(As, y);

        std::vector<Index> next;
        next.reserve(support.size());
        for (std::size_t j = 0; j < support.size(); ++j)
            if (std::abs(fit.beta(static_cast<Index>(j))) >= threshold) next.push_back(support[j]);

        beta.setZero();
        for (std::size_t j = 0; j < support.size(); ++j) beta(support[j]) = fit.beta(static_cast<Index>(j));

        if (next.size() == support.size()) { // support stable; coefficients already refit on it
            return {beta, support};
        }
        support = std::move(next);
        if (support.empty()) return {Vector::Zero(p), {}};
    }

    // Out of iterations: report the last refit restricted to the current support.
    Matrix As(A.rows(), static_cast<Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) As.col(static_cast<Index>(j)) = A.col(support[j]);
    const OlsResult fit = ols(As, y);
    beta.setZero();
    for (std::size_t j = 0; j < support.size(); ++j) beta(support[j]) = fit.beta(static_cast<Index>(j));
    return {beta, support};
}

Matrix central_difference(const Matrix& X, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("central_difference: dt must be positive");
    const Index n = X.rows();
    if (n < 3) throw std::invalid_argument("central_difference: need at least 3 rows");
    Matrix D(n, X.cols());
    D.row(0) = (X.row(1) - X.row(0)) / dt;
    D.middleRows(1, n - 2) = (X.bottomRows(n - 2) - X.topRows(n - 2)) / (2.0 * dt);
    D.row(n - 1) = (X.row(n - 1) - X.row(n - 2)) / dt;
    return D;
}

SparseModel fit_sindyc(const TimeSeriesDataset& ds, const StlsConfig& cfg) {
    cfg.validate();
    ds.validate();

    Matrix states, derivs;
    if (cfg.differentiation == DiffMethod::sg) {
        const SmoothedDerivatives sd = smooth_and_differentiate(ds, cfg.sg);
        states = sd.X_s;
        derivs = sd.Xdot;
    } else {
        states = ds.X;
        derivs = central_difference(ds.X, ds.dt());
    }

    Matrix U = ds.U;
    if (!cfg.include_control) U.resize(ds.n_samples(), 0);

    LibrarySpec lib;
    lib.degree = cfg.degree;
    lib.custom = cfg.custom;
    const DesignMatrix dm = build_design_matrix(states, U, lib);

    SparseModel model;
    model.m = ds.n_states();
    model.r = U.cols();

    for (Index s = 0; s < model.m; ++s) {
        const auto [beta, support] = stls(dm.values, derivs.col(s), cfg.threshold, cfg.max_iter);
        std::vector<Coefficient> coefs;
        for (Index k : support) {
            Coefficient c;
            c.term = dm.terms[static_cast<std::size_t>(k)];
            c.value = beta(k);
            coefs.push_back(std::move(c));
        }
        model.states.push_back(std::move(coefs));
        StateDiagnostics diag;
        diag.eta = cfg.threshold;
        model.diagnostics.push_back(diag);
    }
    return model;
}

} // namespace argosc
