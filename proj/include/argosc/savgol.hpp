#pragma once

#include <vector>

#include "argosc/dataset.hpp"
#include "argosc/types.hpp"

namespace argosc {

enum class WindowSelection { fixed, automatic };

struct SGParams {
    WindowSelection selection = WindowSelection::automatic;
    int window = 0; // samples, odd; ignored unless selection == fixed
    int poly_order = 4;
};

struct SmoothedDerivatives {
    Matrix X_s;   // smoothed states, same shape as the source
    Matrix Xdot;  // derivative estimates, state units per second
    std::vector<SGParams> params_used; // per column, window resolved
};

// Fitted value (deriv=0) or first derivative (deriv=1) of a local
// least-squares polynomial at every sample. Boundary samples reuse the
// first/last window and evaluate the fit off-centre.
Vector sg_filter(const Vector& y, double dt, const SGParams& params, int deriv);

// GCV-optimal odd window for one signal; used by automatic selection.
int select_window(const Vector& y, int poly_order);

// The GCV window balances bias against variance for the smoothed *state*; the
// centre-point derivative is far more bias-sensitive because the symmetric
// kernel's fifth-moment error cancels for the value but not for the slope
// (state bias ∝ w⁶·y⁽⁶⁾ vs derivative bias ∝ w⁴·y⁽⁵⁾). Left at the GCV width,
// that truncation error is serially smooth structure the downstream regression
// happily explains with spurious high-degree terms. Derivative-optimal widths
// sit at roughly half the state-optimal ones over the sampling regimes this
// pipeline targets, so the automatic rule shrinks the GCV choice by a fixed
// ratio (odd, floored at the smallest legal window).
int cap_derivative_window(int w, int poly_order);

SmoothedDerivatives smooth_and_differentiate(const TimeSeriesDataset& ds, const SGParams& params);

} // namespace argosc
