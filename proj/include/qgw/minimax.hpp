#pragma once

#include "qgw/fixedpoint.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qgw::minimax {

using RealFunction = std::function<double(double)>;

struct LinearFit {
    double intercept = 0.0; // A0
    double slope = 0.0;     // A1
    double err_inf = 0.0;   // max |f - (A1 x + A0)| on the evaluation grid
};

/// Degree-1 Remez exchange on a Chebyshev-spaced evaluation grid.
/// The returned residuals equioscillate at three alternation points.
LinearFit fit_linear_minimax(const RealFunction &f, double a, double b, int grid_density = 512);

struct SubdomainFit {
    double intercept = 0.0; // quantized to the coefficient format
    double slope = 0.0;     // quantized to the coefficient format
    double err_inf = 0.0;   // includes quantization error
};

/// Piecewise-linear approximation table over uniform subdomains.
struct PwlSpec {
    double x_lo = 0.0;
    double x_hi = 0.0;
    int n_l = 0;
    std::vector<double> boundaries; // 2^n_l + 1 ascending, spanning the domain
    std::vector<SubdomainFit> fits; // 2^n_l
    fixedpoint::FixedPointFormat coeff_fmt;

    double max_err_inf() const;
};

/// Quantize a fitted line onto coeff_fmt: the slope is rounded to the format,
/// the intercept refit as the minimax intercept for that fixed slope, and the
/// reported error re-evaluated on the grid. RangeError on overflow.
SubdomainFit quantize_linear_fit(const RealFunction &f, double a, double b, double slope,
                                 const fixedpoint::FixedPointFormat &coeff_fmt,
                                 int grid_density = 512);

/// Uniform boundaries, per-subdomain minimax fit, coefficients quantized to
/// coeff_fmt (slope first, intercept refit against the quantized slope so the
/// quantization error stays bounded by half a step over the subdomain).
/// Coefficient overflow raises RangeError naming the subdomain.
PwlSpec build_pwl_spec(const RealFunction &f, double x_lo, double x_hi, int n_l,
                       const fixedpoint::FixedPointFormat &coeff_fmt, int grid_density = 512);

/// A1^l x + A0^l with quantized coefficients; boundary points use the
/// right-hand subdomain (half-open intervals, last closed above).
double eval_pwl(const PwlSpec &spec, double x);

/// Index of x's subdomain under the same half-open rule.
int subdomain_index(const PwlSpec &spec, double x);

std::string to_json(const PwlSpec &spec);
PwlSpec pwl_spec_from_json(const std::string &text);

} // namespace qgw::minimax
