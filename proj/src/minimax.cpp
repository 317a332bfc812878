#include "qgw/minimax.hpp"

#include "qgw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace qgw::minimax {

namespace {

/// Chebyshev-spaced points on [a, b], endpoints included, ascending.
std::vector<double> chebyshev_grid(double a, double b, int count) {
    std::vector<double> xs(static_cast<std::size_t>(count));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < count; ++i) {
        const double t = std::cos(std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
        xs[static_cast<std::size_t>(count - 1 - i)] = mid + half * t;
    }
    xs.front() = a;
    xs.back() = b;
    return xs;
}

struct Reference {
    int i0, i1, i2; // grid indices, ascending
};

LinearFit solve_reference(const std::vector<double> &xs, const std::vector<double> &fs,
                          const Reference &ref, double &levelled_error) {
    const double x0 = xs[ref.i0], x1 = xs[ref.i1], x2 = xs[ref.i2];
    const double f0 = fs[ref.i0], f1 = fs[ref.i1], f2 = fs[ref.i2];
    LinearFit fit;
    fit.slope = (f0 - f2) / (x0 - x2);
    levelled_error = 0.5 * (f0 - f1 - fit.slope * (x0 - x1));
    fit.intercept = f0 - fit.slope * x0 - levelled_error;
    return fit;
}

} // namespace

LinearFit fit_linear_minimax(const RealFunction &f, double a, double b, int grid_density) {
    if (!(a < b)) {
        throw DomainError("minimax interval is empty");
    }
    const int count = std::max(grid_density, 8);
    const auto xs = chebyshev_grid(a, b, count);
    std::vector<double> fs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fs[i] = f(xs[i]);
        if (!std::isfinite(fs[i])) {
            throw DomainError("function not finite at x = " + std::to_string(xs[i]));
        }
    }

    Reference ref{0, count / 2, count - 1};
    LinearFit fit;
    double level = 0.0;
    for (int iter = 0; iter < 128; ++iter) {
        fit = solve_reference(xs, fs, ref, level);

        // Residual extrema on the grid.
        int worst = 0;
        double worst_abs = 0.0;
        std::vector<double> res(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            res[i] = fs[i] - (fit.slope * xs[i] + fit.intercept);
            if (std::abs(res[i]) > worst_abs) {
                worst_abs = std::abs(res[i]);
                worst = static_cast<int>(i);
            }
        }
        fit.err_inf = worst_abs;
        if (worst_abs <= std::abs(level) * (1.0 + 1e-12) + 1e-15) {
            break; // equioscillated
        }

        // Single-point exchange preserving the alternation pattern.
        const double sign_new = res[static_cast<std::size_t>(worst)] >= 0.0 ? 1.0 : -1.0;
        auto sign_at = [&](int i) { return res[static_cast<std::size_t>(i)] >= 0.0 ? 1.0 : -1.0; };
        if (worst < ref.i0) {
            if (sign_new == sign_at(ref.i0)) {
                ref.i0 = worst;
            } else {
                ref.i2 = ref.i1;
                ref.i1 = ref.i0;
                ref.i0 = worst;
            }
        } else if (worst > ref.i2) {
            if (sign_new == sign_at(ref.i2)) {
                ref.i2 = worst;
            } else {
                ref.i0 = ref.i1;
                ref.i1 = ref.i2;
                ref.i2 = worst;
            }
        } else if (worst == ref.i0 || worst == ref.i1 || worst == ref.i2) {
            break;
        } else if (worst < ref.i1) {
            (sign_new == sign_at(ref.i0) ? ref.i0 : ref.i1) = worst;
        } else {
            (sign_new == sign_at(ref.i2) ? ref.i2 : ref.i1) = worst;
        }
    }
    return fit;
}

double PwlSpec::max_err_inf() const {
    double m = 0.0;
    for (const auto &fit : fits) {
        m = std::max(m, fit.err_inf);
    }
    return m;
}

SubdomainFit quantize_linear_fit(const RealFunction &f, double a, double b, double slope,
                                 const fixedpoint::FixedPointFormat &coeff_fmt,
                                 int grid_density) {
    const double slope_q = fixedpoint::decode(fixedpoint::encode(slope, coeff_fmt), coeff_fmt);

    const auto xs = chebyshev_grid(a, b, std::max(grid_density, 8));
    double res_min = std::numeric_limits<double>::infinity();
    double res_max = -res_min;
    for (double x : xs) {
        const double r = f(x) - slope_q * x;
        res_min = std::min(res_min, r);
        res_max = std::max(res_max, r);
    }
    const double intercept_q =
        fixedpoint::decode(fixedpoint::encode(0.5 * (res_min + res_max), coeff_fmt), coeff_fmt);

    double err = 0.0;
    for (double x : xs) {
        err = std::max(err, std::abs(f(x) - (slope_q * x + intercept_q)));
    }
    return SubdomainFit{intercept_q, slope_q, err};
}

PwlSpec build_pwl_spec(const RealFunction &f, double x_lo, double x_hi, int n_l,
                       const fixedpoint::FixedPointFormat &coeff_fmt, int grid_density) {
    if (n_l < 0) {
        throw ConfigError("n_l must be nonnegative");
    }
    if (!(x_lo < x_hi)) {
        throw DomainError("empty fitting domain");
    }
    coeff_fmt.validate();

    PwlSpec spec;
    spec.x_lo = x_lo;
    spec.x_hi = x_hi;
    spec.n_l = n_l;
    spec.coeff_fmt = coeff_fmt;
    const int subdomains = 1 << n_l;
    spec.boundaries.resize(static_cast<std::size_t>(subdomains) + 1);
    for (int k = 0; k <= subdomains; ++k) {
        spec.boundaries[static_cast<std::size_t>(k)] =
            x_lo + (x_hi - x_lo) * static_cast<double>(k) / static_cast<double>(subdomains);
    }
    spec.boundaries.front() = x_lo;
    spec.boundaries.back() = x_hi;

    spec.fits.resize(static_cast<std::size_t>(subdomains));
    for (int k = 0; k < subdomains; ++k) {
        const double lo = spec.boundaries[static_cast<std::size_t>(k)];
        const double hi = spec.boundaries[static_cast<std::size_t>(k) + 1];
        const LinearFit fit = fit_linear_minimax(f, lo, hi, grid_density);
        try {
            spec.fits[static_cast<std::size_t>(k)] =
                quantize_linear_fit(f, lo, hi, fit.slope, coeff_fmt, grid_density);
        } catch (const RangeError &) {
            throw RangeError("coefficient of subdomain " + std::to_string(k) +
                             " overflows the coefficient format");
        }
    }
    return spec;
}

int subdomain_index(const PwlSpec &spec, double x) {
    if (x < spec.x_lo || x > spec.x_hi) {
        throw DomainError("x outside the spec domain");
    }
    const auto it = std::upper_bound(spec.boundaries.begin(), spec.boundaries.end(), x);
    int k = static_cast<int>(it - spec.boundaries.begin()) - 1;
    return std::clamp(k, 0, static_cast<int>(spec.fits.size()) - 1);
}

double eval_pwl(const PwlSpec &spec, double x) {
    const auto &fit = spec.fits[static_cast<std::size_t>(subdomain_index(spec, x))];
    return fit.slope * x + fit.intercept;
}

std::string to_json(const PwlSpec &spec) {
    nlohmann::json j;
    j["x_lo"] = spec.x_lo;
    j["x_hi"] = spec.x_hi;
    j["n_l"] = spec.n_l;
    j["boundaries"] = spec.boundaries;
    j["coeff_format"] = {
        {"representation", spec.coeff_fmt.representation == fixedpoint::Representation::twos_complement
                               ? "twos_complement"
                               : (spec.coeff_fmt.representation ==
                                          fixedpoint::Representation::signed_magnitude
                                      ? "signed_magnitude"
                                      : "unsigned")},
        {"n_bits", spec.coeff_fmt.n_bits},
        {"p", spec.coeff_fmt.p},
    };
    auto &fits = j["subdomains"] = nlohmann::json::array();
    for (const auto &fit : spec.fits) {
        fits.push_back({{"intercept", fit.intercept}, {"slope", fit.slope}, {"err_inf", fit.err_inf}});
    }
    return j.dump(2);
}

PwlSpec pwl_spec_from_json(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    PwlSpec spec;
    spec.x_lo = j.at("x_lo").get<double>();
    spec.x_hi = j.at("x_hi").get<double>();
    spec.n_l = j.at("n_l").get<int>();
    spec.boundaries = j.at("boundaries").get<std::vector<double>>();
    const auto &fmt = j.at("coeff_format");
    const std::string rep = fmt.at("representation").get<std::string>();
    spec.coeff_fmt.representation = rep == "twos_complement"
                                        ? fixedpoint::Representation::twos_complement
                                        : (rep == "signed_magnitude"
                                               ? fixedpoint::Representation::signed_magnitude
                                               : fixedpoint::Representation::unsigned_magnitude);
    spec.coeff_fmt.n_bits = fmt.at("n_bits").get<int>();
    spec.coeff_fmt.p = fmt.at("p").get<int>();
    for (const auto &fit : j.at("subdomains")) {
        spec.fits.push_back(SubdomainFit{fit.at("intercept").get<double>(),
                                         fit.at("slope").get<double>(),
                                         fit.at("err_inf").get<double>()});
    }
    return spec;
}

} // namespace qgw::minimax
