#include "argosc/regression.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace argosc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

} // namespace

OlsResult ols(const Matrix& A, const Vector& y) {
    if (A.rows() != y.size()) throw std::invalid_argument("row count of A must match y");
    if (A.cols() == 0) return {Vector(0), y.squaredNorm()};
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    OlsResult result;
    result.beta = cod.solve(y);
    result.rss = (y - A * result.beta).squaredNorm();
    return result;
}

Vector ridge(const Matrix& A, const Vector& y, double lambda_r) {
    if (!(lambda_r > 0.0)) throw std::invalid_argument("lambda_r must be positive");
    if (A.rows() != y.size()) throw std::invalid_argument("row count of A must match y");
    const Index p = A.cols();
    Matrix M = A.transpose() * A;
    for (Index j = 0; j < p; ++j) {
        const bool constant = A.col(j).maxCoeff() == A.col(j).minCoeff();
        if (!constant) M(j, j) += lambda_r;
    }
    return M.ldlt().solve(A.transpose() * y);
}

void PenaltyWeights::validate(Index p) const {
    if (w.size() != p) throw std::invalid_argument("penalty weight length must match columns");
    for (Index k = 0; k < p; ++k)
        if (std::isnan(w(k)) || w(k) < 0.0)
            throw std::invalid_argument("penalty weights must be non-negative and not NaN");
}

Vector adaptive_weights(const Vector& beta_ridge, double eps) {
    return (beta_ridge.array().abs() + eps).inverse();
}

GramProblem make_gram(const Matrix& A, const Vector& y) {
    if (A.rows() != y.size()) throw std::invalid_argument("row count of A must match y");
    if (A.rows() == 0) throw std::invalid_argument("empty problem");
    GramProblem g;
    g.n = A.rows();
    const double inv_n = 1.0 / static_cast<double>(g.n);
    g.gram = (A.transpose() * A) * inv_n;
    g.corr = (A.transpose() * y) * inv_n;
    g.y_sq = y.squaredNorm() * inv_n;
    return g;
}

std::vector<std::pair<Index, Index>> fold_blocks(Index n, int folds) {
    if (folds < 2 || folds > n)
        throw std::invalid_argument("folds must be between 2 and the sample count");
    std::vector<std::pair<Index, Index>> blocks;
    for (int f = 0; f < folds; ++f) {
        const Index start = n * f / folds;
        const Index end = n * (f + 1) / folds;
        blocks.emplace_back(start, end - start);
    }
    return blocks;
}

GramProblem gram_complement(const GramProblem& full, const GramProblem& part) {
    if (part.n >= full.n) throw std::invalid_argument("part must be a strict subset of full");
    GramProblem out;
    out.n = full.n - part.n;
    const double w_full = static_cast<double>(full.n) / static_cast<double>(out.n);
    const double w_part = static_cast<double>(part.n) / static_cast<double>(out.n);
    out.gram = w_full * full.gram - w_part * part.gram;
    out.corr = w_full * full.corr - w_part * part.corr;
    out.y_sq = w_full * full.y_sq - w_part * part.y_sq;
    return out;
}

CvGram make_cv_gram(const Matrix& A, const Vector& y, int folds) {
    CvGram cv;
    cv.full = make_gram(A, y);
    for (const auto& [start, count] : fold_blocks(cv.full.n, folds)) {
        cv.test.push_back(make_gram(A.middleRows(start, count), y.segment(start, count)));
        cv.train.push_back(gram_complement(cv.full, cv.test.back()));
    }
    return cv;
}

double lasso_objective(const GramProblem& g, const Vector& beta, double lambda, const Vector& w) {
    double penalty = 0.0;
    for (Index k = 0; k < beta.size(); ++k) {
        if (beta(k) == 0.0) continue;
        penalty += w(k) * std::abs(beta(k));
    }
    const double quad = g.y_sq - 2.0 * beta.dot(g.corr) + beta.dot(g.gram * beta);
    return 0.5 * quad + lambda * penalty;
}

Vector lasso_cd_gram(const GramProblem& g, double lambda, const Vector& w, Vector beta,
                     const LassoOptions& opts) {
    const Index p = g.p();
    if (w.size() != p) throw std::invalid_argument("penalty weight length must match columns");
    if (std::isnan(lambda) || lambda < 0.0) throw std::invalid_argument("lambda must be ≥ 0");
    if (beta.size() == 0) beta = Vector::Zero(p);
    if (beta.size() != p) throw std::invalid_argument("warm start length must match columns");

    Vector s = g.gram * beta; // Gβ, maintained incrementally

    // Near-collinear active columns make plain cyclic descent crawl: mass
    // shuffles along the almost-flat direction and per-sweep changes decay at
    // rate 1 − O(1 − ρ²). Once the active set and signs are stable across two
    // full sweeps, jump straight to the minimizer on that face by solving the
    // stationarity system G_AA β_A = corr_A − λ w_A∘σ (minimum-norm via
    // eigendecomposition). Accepted only when the signs stay consistent and
    // the objective does not increase, so descent guarantees are untouched.
    auto try_active_jump = [&](const std::vector<Index>& act) -> bool {
        const Index a = static_cast<Index>(act.size());
        if (a == 0) return false;
        Matrix gaa(a, a);
        Vector rhs(a);
        for (Index i = 0; i < a; ++i) {
            const Index ki = act[static_cast<std::size_t>(i)];
            for (Index j = 0; j < a; ++j) gaa(i, j) = g.gram(ki, act[static_cast<std::size_t>(j)]);
            rhs(i) = g.corr(ki) - lambda * w(ki) * (beta(ki) > 0.0 ? 1.0 : -1.0);
        }
        const Eigen::SelfAdjointEigenSolver<Matrix> eig(gaa);
        if (eig.info() != Eigen::Success) return false;
        const Vector& evals = eig.eigenvalues();
        const double cut = 1e-12 * std::max(evals.cwiseAbs().maxCoeff(), 0.0);
        Vector q = eig.eigenvectors().transpose() * rhs;
        for (Index i = 0; i < a; ++i) q(i) = evals(i) > cut ? q(i) / evals(i) : 0.0;
        const Vector cand = eig.eigenvectors() * q;
        if (!cand.allFinite()) return false;
        for (Index i = 0; i < a; ++i) {
            const Index k = act[static_cast<std::size_t>(i)];
            if (lambda * w(k) > 0.0 && cand(i) * beta(k) < 0.0) return false; // sign flip
        }
        const double obj_cur = lasso_objective(g, beta, lambda, w);
        Vector next = beta;
        for (Index i = 0; i < a; ++i) next(act[static_cast<std::size_t>(i)]) = cand(i);
        const double obj_next = lasso_objective(g, next, lambda, w);
        if (!(obj_next <= obj_cur + 1e-12 * (1.0 + std::abs(obj_cur)))) return false;
        beta = std::move(next);
        s = g.gram * beta;
        return true;
    };

    auto update = [&](Index k) {
        const double gkk = g.gram(k, k);
        if (!(w(k) < kInf) || gkk <= 0.0) {
            if (beta(k) == 0.0) return 0.0;
            const double d = -beta(k);
            s += d * g.gram.col(k);
            beta(k) = 0.0;
            return std::abs(d);
        }
        const double rho = g.corr(k) - s(k) + gkk * beta(k);
        const double next = soft_threshold(rho, lambda * w(k)) / gkk;
        const double d = next - beta(k);
        if (d != 0.0) {
            s += d * g.gram.col(k);
            beta(k) = next;
        }
        return std::abs(d);
    };

    const auto stalled_optimal = [&]() {
        for (Index k = 0; k < p; ++k) {
            if (!(w(k) < kInf)) continue;
            const double gk = g.corr(k) - s(k);
            const double width = lambda * w(k);
            const double scale = width + 1e-3 * std::abs(g.corr(k)) + 1e-12;
            const double viol = beta(k) != 0.0
                                    ? std::abs(gk - width * (beta(k) > 0.0 ? 1.0 : -1.0))
                                    : std::max(0.0, std::abs(gk) - width);
            if (viol > opts.stall_kkt * scale) return false;
        }
        return true;
    };

#ifndef NDEBUG
    double prev_obj = kInf;
#endif
    long sweeps = 0;
    double last_change = kInf;
    std::vector<Index> active, sig, last_sig;
    while (sweeps < opts.max_sweeps) {
        ++sweeps;
        double change = 0.0;
        for (Index k = 0; k < p; ++k) change = std::max(change, update(k));
#ifndef NDEBUG
        const double obj = lasso_objective(g, beta, lambda, w);
        assert(obj <= prev_obj + 1e-10 * (1.0 + std::abs(prev_obj)));
        prev_obj = obj;
#endif
        last_change = change;
        if (change < opts.tol) return beta;
        if (change < opts.stall_tol && stalled_optimal()) return beta;

        active.clear();
        sig.clear();
        for (Index k = 0; k < p; ++k)
            if (beta(k) != 0.0) {
                active.push_back(k);
                sig.push_back(beta(k) > 0.0 ? k + 1 : -(k + 1));
            }
        if (sig == last_sig && try_active_jump(active)) continue; // verify next sweep
        last_sig = sig;

        // Bounded active-set refinement between full passes; only complete
        // cyclic passes count toward the sweep budget. A stalled episode falls
        // back to the outer loop where the stable-face jump takes over.
        for (int pass = 0; pass < 50; ++pass) {
            double inner = 0.0;
            for (Index k : active) inner = std::max(inner, update(k));
            if (inner < opts.tol) break;
        }
    }
    throw std::runtime_error("coordinate descent did not converge: lambda=" +
                             std::to_string(lambda) + ", sweeps=" + std::to_string(sweeps) +
                             ", last max change=" + std::to_string(last_change));
}

Vector lasso_cd(const Matrix& A, const Vector& y, double lambda, const PenaltyWeights& w,
                const Vector* warm_start, const LassoOptions& opts) {
    w.validate(A.cols());
    if (!A.allFinite() || !y.allFinite()) throw std::invalid_argument("non-finite inputs");
    return lasso_cd_gram(make_gram(A, y), lambda, w.w, warm_start ? *warm_start : Vector(), opts);
}

Vector default_lambda_grid(const GramProblem& g, const Vector& w, int count, double ratio) {
    if (count < 2) throw std::invalid_argument("grid needs at least two values");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must be in (0,1)");
    double lambda_max = 0.0;
    for (Index k = 0; k < g.p(); ++k)
        if (w(k) > 0.0 && w(k) < kInf)
            lambda_max = std::max(lambda_max, std::abs(g.corr(k)) / w(k));
    if (lambda_max <= 0.0) lambda_max = 1e-12; // response orthogonal to every column
    Vector grid(count);
    const double step = std::log(ratio) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) grid(i) = lambda_max * std::exp(step * i);
    return grid;
}

Vector default_lambda_grid(const Matrix& A, const Vector& y, const PenaltyWeights& w, int count,
                           double ratio) {
    w.validate(A.cols());
    return default_lambda_grid(make_gram(A, y), w.w, count, ratio);
}

namespace {

void check_grid(const Vector& grid) {
    if (grid.size() == 0) throw std::invalid_argument("lambda grid is empty");
    for (Index i = 0; i < grid.size(); ++i) {
        if (!(grid(i) > 0.0)) throw std::invalid_argument("lambda grid must be positive");
        if (i > 0 && !(grid(i) < grid(i - 1)))
            throw std::invalid_argument("lambda grid must be strictly descending");
    }
}

double gram_mse(const GramProblem& g, const Vector& beta) {
    return g.y_sq - 2.0 * beta.dot(g.corr) + beta.dot(g.gram * beta);
}

} // namespace

LassoPath cv_lasso_path(const CvGram& cv, const Vector& w, const Vector& lambda_grid,
                        const LassoOptions& opts, bool full_coefs) {
    check_grid(lambda_grid);
    const Index L = lambda_grid.size();
    const Index p = cv.full.p();
    const int folds = static_cast<int>(cv.test.size());

    Matrix fold_mse(folds, L);
    for (int f = 0; f < folds; ++f) {
        Vector beta = Vector::Zero(p);
        for (Index i = 0; i < L; ++i) {
            beta = lasso_cd_gram(cv.train[f], lambda_grid(i), w, std::move(beta), opts);
            fold_mse(f, i) = gram_mse(cv.test[f], beta);
        }
    }

    LassoPath path;
    path.lambdas = lambda_grid;
    path.cv_mse = fold_mse.colwise().mean();
    path.cv_se.resize(L);
    for (Index i = 0; i < L; ++i) {
        const double mean = path.cv_mse(i);
        const double var =
            (fold_mse.col(i).array() - mean).square().sum() / static_cast<double>(folds - 1);
        path.cv_se(i) = std::sqrt(var / static_cast<double>(folds));
    }
    path.star_index = 0;
    for (Index i = 1; i < L; ++i)
        if (path.cv_mse(i) < path.cv_mse(path.star_index)) path.star_index = i;
    path.lambda_star = lambda_grid(path.star_index);

    path.coefs = Matrix::Zero(p, L);
    const Index last = full_coefs ? L - 1 : path.star_index;
    Vector beta = Vector::Zero(p);
    for (Index i = 0; i <= last; ++i) {
        beta = lasso_cd_gram(cv.full, lambda_grid(i), w, std::move(beta), opts);
        path.coefs.col(i) = beta;
    }
    return path;
}

LassoPath cv_select_lambda(const Matrix& A, const Vector& y, const PenaltyWeights& w, int folds,
                           const Vector& lambda_grid, const LassoOptions& opts) {
    w.validate(A.cols());
    check_grid(lambda_grid);
    return cv_lasso_path(make_cv_gram(A, y, folds), w.w, lambda_grid, opts);
}

Vector ridge_gram(const GramProblem& g, double lambda_r) {
    if (!(lambda_r > 0.0)) throw std::invalid_argument("lambda_r must be positive");
    const double n = static_cast<double>(g.n);
    Matrix M = n * g.gram;
    M.diagonal().array() += lambda_r;
    return M.ldlt().solve(n * g.corr);
}

Vector default_ridge_grid(Index n) {
    Vector grid(41);
    for (int i = 0; i < 41; ++i) grid(i) = static_cast<double>(n) * std::pow(10.0, -8.0 + 0.25 * i);
    return grid;
}

RidgeSelection cv_select_ridge(const CvGram& cv, const Vector& grid) {
    if (grid.size() == 0) throw std::invalid_argument("ridge grid is empty");
    const Index L = grid.size();
    const int folds = static_cast<int>(cv.test.size());
    Matrix fold_mse(folds, L);
    for (int f = 0; f < folds; ++f) {
        const auto& tr = cv.train[f];
        const double n_tr = static_cast<double>(tr.n);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(tr.gram);
        const Vector q = eig.eigenvectors().transpose() * tr.corr;
        for (Index i = 0; i < L; ++i) {
            const Vector scaled =
                (q.array() * n_tr / (n_tr * eig.eigenvalues().array() + grid(i))).matrix();
            const Vector beta = eig.eigenvectors() * scaled;
            fold_mse(f, i) = gram_mse(cv.test[f], beta);
        }
    }
    RidgeSelection sel;
    sel.grid = grid;
    sel.cv_mse = fold_mse.colwise().mean();
    sel.star_index = 0;
    for (Index i = 1; i < L; ++i)
        if (sel.cv_mse(i) < sel.cv_mse(sel.star_index)) sel.star_index = i;
    sel.lambda_star = grid(sel.star_index);
    return sel;
}

OlsResult ols_gram(const GramProblem& g, const std::vector<Index>& support) {
    const Index k = static_cast<Index>(support.size());
    OlsResult result;
    if (k == 0) {
        result.beta = Vector(0);
        result.rss = static_cast<double>(g.n) * g.y_sq;
        return result;
    }
    Matrix Gk(k, k);
    Vector ck(k);
    for (Index a = 0; a < k; ++a) {
        ck(a) = g.corr(support[static_cast<std::size_t>(a)]);
        for (Index b = 0; b < k; ++b)
            Gk(a, b) = g.gram(support[static_cast<std::size_t>(a)],
                              support[static_cast<std::size_t>(b)]);
    }
    // Jacobi equilibration keeps columns of wildly different magnitude from
    // hiding each other in the eigenvalue cut.
    Vector scale(k);
    for (Index a = 0; a < k; ++a) scale(a) = Gk(a, a) > 0.0 ? std::sqrt(Gk(a, a)) : 1.0;
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) Gk(a, b) /= scale(a) * scale(b);
    const Vector cs = ck.array() / scale.array();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(Gk);
    const double cut = 1e-12 * std::max(eig.eigenvalues().maxCoeff(), 0.0);
    Vector beta_s = Vector::Zero(k);
    for (Index i = 0; i < k; ++i) {
        const double mu = eig.eigenvalues()(i);
        if (mu <= cut || mu <= 0.0) continue;
        beta_s += (eig.eigenvectors().col(i).dot(cs) / mu) * eig.eigenvectors().col(i);
    }
    result.beta = beta_s.array() / scale.array();
    const double quad = beta_s.dot(Gk * beta_s); // Gk equilibrated: βᵀGβ is scale-invariant
    result.rss =
        std::max(0.0, static_cast<double>(g.n) * (g.y_sq - 2.0 * result.beta.dot(ck) + quad));
    return result;
}

KktReport kkt_check(const GramProblem& g, const Vector& beta, double lambda, const Vector& w) {
    const Vector grad = g.gram * beta - g.corr;
    KktReport report;
    for (Index k = 0; k < beta.size(); ++k) {
        if (beta(k) != 0.0) {
            report.worst_active =
                std::max(report.worst_active, std::abs(std::abs(grad(k)) - lambda * w(k)));
        } else if (w(k) < kInf) {
            report.worst_inactive =
                std::max(report.worst_inactive, std::abs(grad(k)) - lambda * w(k));
        }
    }
    report.worst_inactive = std::max(report.worst_inactive, 0.0);
    return report;
}

KktReport kkt_check(const Matrix& A, const Vector& y, const Vector& beta, double lambda,
                    const Vector& w) {
    return kkt_check(make_gram(A, y), beta, lambda, w);
}

} // namespace argosc
