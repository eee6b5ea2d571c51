#include "argosc/savgol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace argosc {

namespace {

// Row j holds the weights that evaluate the window's least-squares polynomial
// (deriv=0) or its d/dτ derivative (deriv=1) at offset position j, with the
// offsets scaled to τ ∈ [-1, 1] to keep the normal equations well conditioned.
Matrix weight_table(int window, int order, int deriv) {
    const double h = (window - 1) / 2.0;
    Matrix V(window, order + 1);
    for (int i = 0; i < window; ++i) {
        const double tau = (i - h) / h;
        double p = 1.0;
        for (int k = 0; k <= order; ++k) {
            V(i, k) = p;
            p *= tau;
        }
    }
    Matrix E(order + 1, window);
    for (int j = 0; j < window; ++j) {
        const double tau = (j - h) / h;
        double p = 1.0; // τ^k for deriv=0, τ^(k-1) for the derivative basis
        for (int k = 0; k <= order; ++k) {
            if (deriv == 0) {
                E(k, j) = p;
                p *= tau;
            } else {
                E(k, j) = k == 0 ? 0.0 : k * p;
                if (k >= 1) p *= tau;
            }
        }
    }
    Eigen::LDLT<Matrix> gram(V.transpose() * V);
    return (V * gram.solve(E)).transpose();
}

void check_window(Index n, int window, int order) {
    if (order < 2) throw std::invalid_argument("poly_order must be at least 2");
    if (window % 2 == 0) throw std::invalid_argument("window must be odd");
    if (window < order + 2)
        throw std::invalid_argument("window " + std::to_string(window) +
                                    " too small for poly_order " + std::to_string(order));
    if (window > n)
        throw std::invalid_argument("window " + std::to_string(window) +
                                    " exceeds signal length " + std::to_string(n));
}

Vector apply_weights(const Vector& y, const Matrix& W, double scale) {
    const Index n = y.size();
    const int w = static_cast<int>(W.rows());
    const int half = (w - 1) / 2;
    Vector out(n);
    for (int i = 0; i < half; ++i) out(i) = W.row(i).dot(y.head(w));
    const auto center = W.row(half);
    for (Index i = half; i < n - half; ++i) out(i) = center.dot(y.segment(i - half, w));
    for (Index i = n - half; i < n; ++i)
        out(i) = W.row(static_cast<int>(i - (n - w))).dot(y.tail(w));
    return scale == 1.0 ? out : Vector(out * scale);
}

} // namespace

int select_window(const Vector& y, int poly_order) {
    const Index n = y.size();
    if (n < 25) throw std::invalid_argument("automatic window selection needs at least 25 samples");
    int lo = poly_order + 2;
    if (lo % 2 == 0) ++lo;
    lo = std::max(lo, 7);
    int hi = static_cast<int>(std::min<Index>(n / 10, 501));
    if (hi % 2 == 0) --hi;
    hi = std::max(hi, lo);
    check_window(n, lo, poly_order);

    int best_w = lo;
    double best = std::numeric_limits<double>::infinity();
    for (int w = lo; w <= hi; w += 2) {
        const Matrix W = weight_table(w, poly_order, 0);
        const Vector smoothed = apply_weights(y, W, 1.0);
        const double rss = (y - smoothed).squaredNorm();
        // tr(H) taken as n times the centre weight; boundary rows differ but
        // contribute O(window) of n diagonal entries.
        const double trace = static_cast<double>(n) * W((w - 1) / 2, (w - 1) / 2);
        const double denom = static_cast<double>(n) - trace;
        const double gcv = static_cast<double>(n) * rss / (denom * denom);
        if (gcv < best) {
            best = gcv;
            best_w = w;
        }
    }
    return best_w;
}

int cap_derivative_window(int w, int poly_order) {
    int lo = poly_order + 2;
    if (lo % 2 == 0) ++lo;
    lo = std::max(lo, 7);
    const int wc = static_cast<int>(std::lround(0.45 * w)) | 1;
    return std::max(wc, lo);
}

Vector sg_filter(const Vector& y, double dt, const SGParams& params, int deriv) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (deriv != 0 && deriv != 1) throw std::invalid_argument("deriv must be 0 or 1");
    if (!y.allFinite()) throw std::invalid_argument("non-finite input signal");
    const int window = params.selection == WindowSelection::fixed
                           ? params.window
                           : select_window(y, params.poly_order);
    check_window(y.size(), window, params.poly_order);
    const Matrix W = weight_table(window, params.poly_order, deriv);
    const double h = (window - 1) / 2.0;
    const double scale = deriv == 0 ? 1.0 : 1.0 / (h * dt);
    return apply_weights(y, W, scale);
}

SmoothedDerivatives smooth_and_differentiate(const TimeSeriesDataset& ds, const SGParams& params) {
    ds.validate();
    const Index n = ds.n_samples();
    const Index m = ds.n_states();
    const double dt = ds.dt();

    SmoothedDerivatives out;
    out.X_s.resize(n, m);
    out.Xdot.resize(n, m);
    out.params_used.assign(static_cast<std::size_t>(m), params);
    for (Index j = 0; j < m; ++j) {
        SGParams col = params;
        if (col.selection == WindowSelection::automatic) {
            col.selection = WindowSelection::fixed;
            col.window = select_window(ds.X.col(j), params.poly_order);
            col.window = cap_derivative_window(col.window, col.poly_order);
        }
        out.params_used[static_cast<std::size_t>(j)] = col;
        out.X_s.col(j) = sg_filter(ds.X.col(j), dt, col, 0);
        out.Xdot.col(j) = sg_filter(ds.X.col(j), dt, col, 1);
    }
    return out;
}

} // namespace argosc
