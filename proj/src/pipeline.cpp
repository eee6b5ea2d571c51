#include "argosc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "argosc/parallel.hpp"
#include "argosc/regression.hpp"
#include "argosc/rng.hpp"

namespace argosc {

void PipelineConfig::validate() const {
    if (degree < 1) throw std::invalid_argument("degree must be at least 1");
    if (bootstrap_samples < 100) throw std::invalid_argument("bootstrap_samples must be ≥ 100");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    if (cv_folds < 2) throw std::invalid_argument("cv_folds must be at least 2");
    for (Index i = 0; i < eta_grid.size(); ++i) {
        if (!(eta_grid(i) > 0.0)) throw std::invalid_argument("eta grid must be positive");
        if (i > 0 && !(eta_grid(i) > eta_grid(i - 1)))
            throw std::invalid_argument("eta grid must be strictly ascending");
    }
}

Vector default_eta_grid() {
    Vector eta(10);
    for (int i = 0; i < 10; ++i) eta(i) = std::pow(10.0, -8 + i);
    return eta;
}

double bic(double rss, Index n, Index k) {
    if (k < 0 || n <= k) throw std::invalid_argument("bic needs n > k ≥ 0");
    if (rss < 0.0) throw std::invalid_argument("rss must be non-negative");
    const double nd = static_cast<double>(n);
    return nd * std::log(std::max(rss, 1e-300) / nd) + static_cast<double>(k) * std::log(nd);
}

std::pair<int, int> bootstrap_order_ranks(int B, double alpha) {
    int lo = static_cast<int>(std::floor(static_cast<double>(B) * alpha / 2.0 + 1e-9));
    lo = std::max(lo, 1);
    return {lo, B - lo + 1};
}

std::vector<TermCi> bootstrap_ci(const std::function<Vector(const std::vector<Index>&)>& fit,
                                 Index n_rows, Index n_terms, int B, double alpha,
                                 std::uint64_t seed) {
    if (B < 100) throw std::invalid_argument("B must be at least 100");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    if (n_rows < 1) throw std::invalid_argument("need at least one row");

    Matrix estimates(B, n_terms);
    parallel_for(B, [&](long b) {
        RandomStream stream(derive_stream(seed, static_cast<std::uint64_t>(b), kBootstrapStream));
        std::vector<Index> rows(static_cast<std::size_t>(n_rows));
        for (auto& r : rows)
            r = static_cast<Index>(stream.below(static_cast<std::uint64_t>(n_rows)));
        const Vector beta = fit(rows);
        if (beta.size() != n_terms)
            throw std::logic_error("bootstrap fit returned wrong coefficient count");
        estimates.row(b) = beta.transpose();
    });

    const auto [lo_rank, up_rank] = bootstrap_order_ranks(B, alpha);
    std::vector<TermCi> out(static_cast<std::size_t>(n_terms));
    std::vector<double> column(static_cast<std::size_t>(B));
    for (Index t = 0; t < n_terms; ++t) {
        int retained = 0;
        for (int b = 0; b < B; ++b) {
            column[static_cast<std::size_t>(b)] = estimates(b, t);
            if (estimates(b, t) != 0.0) ++retained;
        }
        std::sort(column.begin(), column.end());
        auto& ci = out[static_cast<std::size_t>(t)];
        ci.lower = column[static_cast<std::size_t>(lo_rank - 1)];
        ci.upper = column[static_cast<std::size_t>(up_rank - 1)];
        ci.retained = retained;
    }
    return out;
}

namespace {

// Everything one Algorithm-1 selection pass needs, computed from one dense
// sweep over the (possibly resampled) rows: raw Gram for OLS/BIC plus
// standardized-and-centred fold Grams for the penalized stage.
struct KernelData {
    GramProblem raw;
    CvGram cv;                 // active (non-frozen) columns only
    ScalingRecord rec;         // over all columns
    std::vector<Index> active; // raw indices of the active columns
    double y_mean = 0.0;
    Index n = 0;
};

KernelData build_kernel_data(const Matrix& A, const Vector& y,
                             const std::vector<TermDescriptor>& terms, int folds) {
    KernelData kd;
    kd.n = A.rows();
    kd.raw = make_gram(A, y);
    kd.y_mean = y.mean();

    const Index p = A.cols();
    const Vector mu = A.colwise().mean();
    Vector sd(p);
    kd.rec.mean = Vector::Zero(p);
    kd.rec.scale = Vector::Ones(p);
    kd.rec.zero_variance.assign(static_cast<std::size_t>(p), 0);
    for (Index j = 0; j < p; ++j) {
        // population sd via the Gram diagonal: E[a²] − μ²
        const double var = std::max(0.0, kd.raw.gram(j, j) - mu(j) * mu(j));
        sd(j) = std::sqrt(var);
        const bool constant = terms[static_cast<std::size_t>(j)].is_constant();
        if (constant && kd.rec.constant_index < 0) kd.rec.constant_index = j;
        if (constant || sd(j) <= 1e-12 * std::max(1.0, std::abs(mu(j)))) {
            kd.rec.zero_variance[static_cast<std::size_t>(j)] = 1;
            continue;
        }
        kd.rec.mean(j) = mu(j);
        kd.rec.scale(j) = sd(j);
        kd.active.push_back(j);
    }

    const auto& act = kd.active;
    const Vector mu_a = mu(act);
    const Vector sd_a = sd(act);
    const Matrix scale_outer = sd_a * sd_a.transpose();

    kd.cv.full.n = kd.n;
    kd.cv.full.gram =
        ((kd.raw.gram(act, act) - mu_a * mu_a.transpose()).array() / scale_outer.array()).matrix();
    kd.cv.full.corr = ((kd.raw.corr(act) - mu_a * kd.y_mean).array() / sd_a.array()).matrix();
    kd.cv.full.y_sq = kd.raw.y_sq - kd.y_mean * kd.y_mean;

    if (folds < 2) return kd; // caller needs no cross-validation folds
    for (const auto& [start, count] : fold_blocks(kd.n, folds)) {
        const auto rows = A.middleRows(start, count);
        const auto yf = y.segment(start, count);
        const GramProblem raw_f = make_gram(rows, yf);
        const Vector mf = rows.colwise().mean()(act);
        const double ybar_f = yf.mean();

        GramProblem test;
        test.n = count;
        test.gram = ((raw_f.gram(act, act) - mu_a * mf.transpose() - mf * mu_a.transpose() +
                      mu_a * mu_a.transpose())
                         .array() /
                     scale_outer.array())
                        .matrix();
        test.corr =
            ((raw_f.corr(act) - mu_a * ybar_f - mf * kd.y_mean + mu_a * kd.y_mean).array() /
             sd_a.array())
                .matrix();
        test.y_sq = raw_f.y_sq - 2.0 * kd.y_mean * ybar_f + kd.y_mean * kd.y_mean;
        kd.cv.train.push_back(gram_complement(kd.cv.full, test));
        kd.cv.test.push_back(std::move(test));
    }
    return kd;
}

struct PenalizedFit {
    Vector beta_raw;            // original scale, full column count
    std::vector<Index> support; // penalized selection (active nonzeros)
    double lambda_star = 0.0;
    Vector weights_raw;         // per raw column, +inf on frozen columns
};

// CV-tuned (adaptive) lasso on the standardized problem, mapped back to the
// original scale with the intercept folded into the constant column.
PenalizedFit penalized_fit(const KernelData& kd, const PipelineConfig& cfg,
                           const LassoOptions& opts) {
    const Index pa = kd.cv.full.p();
    Vector w;
    if (cfg.penalty == PenaltyKind::adaptive_lasso) {
        const RidgeSelection rs = cv_select_ridge(kd.cv, default_ridge_grid(kd.n));
        w = adaptive_weights(ridge_gram(kd.cv.full, rs.lambda_star));
    } else {
        w = Vector::Ones(pa);
    }
    const Vector grid = default_lambda_grid(kd.cv.full, w);
    const LassoPath path = cv_lasso_path(kd.cv, w, grid, opts, /*full_coefs=*/false);
    const Vector beta_act = path.coefs.col(path.star_index);

    PenalizedFit pf;
    pf.lambda_star = path.lambda_star;
    pf.weights_raw =
        Vector::Constant(kd.rec.mean.size(), std::numeric_limits<double>::infinity());
    Vector beta_std = Vector::Zero(kd.rec.mean.size());
    for (Index a = 0; a < pa; ++a) {
        pf.weights_raw(kd.active[static_cast<std::size_t>(a)]) = w(a);
        beta_std(kd.active[static_cast<std::size_t>(a)]) = beta_act(a);
        if (beta_act(a) != 0.0) pf.support.push_back(kd.active[static_cast<std::size_t>(a)]);
    }
    pf.beta_raw = back_transform(kd.rec, beta_std);
    if (kd.rec.constant_index >= 0) pf.beta_raw(kd.rec.constant_index) += kd.y_mean;
    return pf;
}

struct KernelResult {
    Vector beta1_raw;
    Vector beta_hat; // selected OLS estimate, zeros off support
    std::vector<Index> support_hat;
    std::vector<EtaRecord> etas;
    Index eta_index = -1;
    double bic_min = 0.0;
    double lambda_star = 0.0;
    Vector weights_raw;
};

void eta_sweep(const KernelData& kd, const Vector& eta, bool record, KernelResult& kr) {
    const Index p = kr.beta1_raw.size();
    double best_bic = std::numeric_limits<double>::infinity();
    std::size_t best_size = 0;
    Vector best_coefs;
    for (Index i = 0; i < eta.size(); ++i) {
        std::vector<Index> support;
        for (Index k = 0; k < p; ++k)
            if (std::abs(kr.beta1_raw(k)) >= eta(i)) support.push_back(k);
        const OlsResult fit = ols_gram(kd.raw, support);
        const double score = bic(fit.rss, kd.n, static_cast<Index>(support.size()));
        if (record) kr.etas.push_back({eta(i), support, fit.beta, score});
        const bool better = score < best_bic ||
                            (score == best_bic && support.size() < best_size);
        if (better) {
            best_bic = score;
            best_size = support.size();
            kr.eta_index = i;
            kr.support_hat = support;
            best_coefs = fit.beta;
        }
    }
    kr.bic_min = best_bic;
    kr.beta_hat = Vector::Zero(p);
    for (std::size_t a = 0; a < kr.support_hat.size(); ++a)
        kr.beta_hat(kr.support_hat[a]) = best_coefs(static_cast<Index>(a));
}

// Trimmed-library penalized re-fit, threshold grid, per-support OLS, BIC
// minimum — the block the bootstrap repeats on every resample.
KernelResult selection_kernel(const KernelData& kd, const PipelineConfig& cfg, const Vector& eta,
                              bool record, const LassoOptions& opts) {
    KernelResult kr;
    PenalizedFit pf = penalized_fit(kd, cfg, opts);
    kr.beta1_raw = std::move(pf.beta_raw);
    kr.lambda_star = pf.lambda_star;
    kr.weights_raw = std::move(pf.weights_raw);
    eta_sweep(kd, eta, record, kr);
    return kr;
}

// Bootstrap replicate of the selection block at the tuning the point estimate
// chose: the point's adaptive weights and λ*, with only the data resampled.
// Re-deriving weights and λ by CV inside each replicate lets tuning noise — not
// the data — drive the resampled selections; when the library holds
// near-equivalent parameterizations (a control that is itself a function of
// state) that freedom flips every replicate to a different algebraic form than
// the point fit and the intersection retains nothing.
KernelResult selection_kernel_fixed(const KernelData& kd, const Vector& eta,
                                    const Vector& weights_raw, double lambda_star,
                                    const LassoOptions& opts) {
    const Index pa = kd.cv.full.p();
    Vector w(pa);
    for (Index a = 0; a < pa; ++a) w(a) = weights_raw(kd.active[static_cast<std::size_t>(a)]);
    const Vector beta_act = lasso_cd_gram(kd.cv.full, lambda_star, w, Vector::Zero(pa), opts);

    KernelResult kr;
    kr.lambda_star = lambda_star;
    Vector beta_std = Vector::Zero(kd.rec.mean.size());
    for (Index a = 0; a < pa; ++a) beta_std(kd.active[static_cast<std::size_t>(a)]) = beta_act(a);
    kr.beta1_raw = back_transform(kd.rec, beta_std);
    if (kd.rec.constant_index >= 0) kr.beta1_raw(kd.rec.constant_index) += kd.y_mean;
    eta_sweep(kd, eta, /*record=*/false, kr);
    return kr;
}

} // namespace

ArgoscFit fit_argosc(const TimeSeriesDataset& ds, const PipelineConfig& cfg) {
    cfg.validate();
    ds.validate();
    const Index n = ds.n_samples();
    const Index m = ds.n_states();
    if (n < cfg.cv_folds) throw std::invalid_argument("not enough samples for cross-validation");

    const SmoothedDerivatives sm = smooth_and_differentiate(ds, cfg.sg);
    const Matrix U = cfg.include_control ? ds.U : Matrix(n, 0);
    LibrarySpec lib;
    lib.degree = cfg.degree;
    lib.custom = cfg.custom;
    const DesignMatrix dm0 = build_design_matrix(sm.X_s, U, lib);
    const Vector eta = cfg.eta_grid.size() > 0 ? cfg.eta_grid : default_eta_grid();
    const LassoOptions opts;

    ArgoscFit out;
    out.model.m = m;
    out.model.r = U.cols();
    out.trace.library = dm0.terms;

    for (Index j = 0; j < m; ++j) {
        const Vector y = sm.Xdot.col(j);
        StateTrace st;

        const KernelData kd0 = build_kernel_data(dm0.values, y, dm0.terms, cfg.cv_folds);
        const PenalizedFit pf0 = penalized_fit(kd0, cfg, opts);
        st.support0 = pf0.support;
        st.lambda_star0 = pf0.lambda_star;

        // Reading the trim degree straight off the full-library selection is
        // fragile: with near-duplicate columns (states with nonzero means make
        // x_i·x_j track x_i) the penalized path sometimes swaps a genuine
        // low-degree term for a cluster of high-degree aliases, and no subset
        // of *that* support can reveal the mistake. Instead the selection
        // kernel runs once per candidate degree and the degree whose selected
        // model earns the best BIC wins; ties go to the lower degree.
        int d1 = 1;
        double degree_bic = std::numeric_limits<double>::infinity();
        for (int d = 1; d <= cfg.degree; ++d) {
            double b;
            if (d == cfg.degree) {
                KernelResult kr0;
                kr0.beta1_raw = pf0.beta_raw;
                eta_sweep(kd0, eta, false, kr0);
                b = kr0.bic_min;
            } else {
                const DesignMatrix dmd = trim_library(dm0, d);
                const KernelData kdd = build_kernel_data(dmd.values, y, dmd.terms, cfg.cv_folds);
                b = selection_kernel(kdd, cfg, eta, false, opts).bic_min;
            }
            if (b < degree_bic) {
                degree_bic = b;
                d1 = d;
            }
        }
        st.trimmed_degree = d1;

        const DesignMatrix dm1 = trim_library(dm0, d1);
        st.trimmed_terms = dm1.terms;
        const Index p1 = dm1.p();

        const KernelData kd1 = build_kernel_data(dm1.values, y, dm1.terms, cfg.cv_folds);
        const KernelResult point = selection_kernel(kd1, cfg, eta, true, opts);
        st.lambda_star = point.lambda_star;
        st.beta1 = point.beta1_raw;
        st.eta_records = point.etas;
        st.chosen_eta = point.eta_index;

        auto replicate = [&](const std::vector<Index>& rows) {
            Matrix Ab(static_cast<Index>(rows.size()), p1);
            Vector yb(static_cast<Index>(rows.size()));
            for (std::size_t i = 0; i < rows.size(); ++i) {
                Ab.row(static_cast<Index>(i)) = dm1.values.row(rows[i]);
                yb(static_cast<Index>(i)) = y(rows[i]);
            }
            const KernelData kdb = build_kernel_data(Ab, yb, dm1.terms, /*folds=*/0);
            return selection_kernel_fixed(kdb, eta, point.weights_raw, point.lambda_star, opts)
                .beta_hat;
        };
        const std::vector<TermCi> cis =
            bootstrap_ci(replicate, n, p1, cfg.bootstrap_samples, cfg.alpha, cfg.seed);
        st.retained_count.resize(static_cast<std::size_t>(p1));
        for (Index k = 0; k < p1; ++k)
            st.retained_count[static_cast<std::size_t>(k)] = cis[static_cast<std::size_t>(k)].retained;

        std::vector<Index> keep;
        for (Index k : point.support_hat) {
            const auto& ci = cis[static_cast<std::size_t>(k)];
            const double value = point.beta_hat(k);
            const bool excludes_zero = ci.lower > 0.0 || ci.upper < 0.0;
            if (excludes_zero && ci.lower <= value && value <= ci.upper) keep.push_back(k);
        }

        const OlsResult final_fit = ols_gram(kd1.raw, keep);
        std::vector<Coefficient> coefs;
        for (std::size_t a = 0; a < keep.size(); ++a) {
            Coefficient c;
            c.term = dm1.terms[static_cast<std::size_t>(keep[a])];
            c.value = final_fit.beta(static_cast<Index>(a));
            c.ci_lower = cis[static_cast<std::size_t>(keep[a])].lower;
            c.ci_upper = cis[static_cast<std::size_t>(keep[a])].upper;
            c.retained_count = cis[static_cast<std::size_t>(keep[a])].retained;
            coefs.push_back(std::move(c));
        }
        out.model.states.push_back(std::move(coefs));

        StateDiagnostics diag;
        diag.lambda_star = point.lambda_star;
        diag.eta = point.eta_index >= 0 ? eta(point.eta_index) : 0.0;
        diag.eta_index = static_cast<int>(point.eta_index);
        diag.bic = point.bic_min;
        diag.bootstrap_samples = cfg.bootstrap_samples;
        diag.trimmed_degree = st.trimmed_degree;
        out.model.diagnostics.push_back(diag);
        out.trace.states.push_back(std::move(st));
    }
    return out;
}

void save_trace(const SelectionTrace& trace, const std::string& path) {
    nlohmann::json j;
    j["library"] = nlohmann::json::array();
    for (const auto& term : trace.library) {
        nlohmann::json t;
        t["exponents"] = term.exponents;
        if (term.is_custom()) t["custom_tag"] = term.custom_tag;
        j["library"].push_back(t);
    }
    j["states"] = nlohmann::json::array();
    for (const auto& st : trace.states) {
        nlohmann::json s;
        s["support0"] = st.support0;
        s["trimmed_degree"] = st.trimmed_degree;
        s["lambda_star0"] = st.lambda_star0;
        s["lambda_star"] = st.lambda_star;
        s["beta1"] = std::vector<double>(st.beta1.data(), st.beta1.data() + st.beta1.size());
        s["chosen_eta_index"] = st.chosen_eta;
        s["retained_count"] = st.retained_count;
        s["eta"] = nlohmann::json::array();
        for (const auto& rec : st.eta_records) {
            nlohmann::json e;
            e["eta"] = rec.eta;
            e["support"] = rec.support;
            e["coefs"] = std::vector<double>(rec.coefs.data(), rec.coefs.data() + rec.coefs.size());
            e["bic"] = rec.bic;
            s["eta"].push_back(e);
        }
        j["states"].push_back(s);
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << j.dump(2) << "\n";
}

} // namespace argosc
