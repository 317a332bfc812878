#include "qgw/waveform.hpp"

#include "qgw/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

namespace qgw::waveform {

namespace {

constexpr double kPi = std::numbers::pi;

/// Integral of f^{-7/6} over [lo, hi] via the closed-form antiderivative
/// -6 f^{-1/6}.
double amplitude_bin_integral(double lo, double hi) {
    return 6.0 * (std::pow(lo, -1.0 / 6.0) - std::pow(hi, -1.0 / 6.0));
}

} // namespace

void WaveformParams::validate() const {
    if (m1 <= 0.0 || m2 <= 0.0) {
        throw DomainError("component masses must be positive");
    }
    if (std::abs(chi1z) > 1.0 || std::abs(chi2z) > 1.0) {
        throw DomainError("aligned spins must lie in [-1, 1]");
    }
}

DerivedParams derived_params(double m1, double m2, double chi1z, double chi2z) {
    if (m1 <= 0.0 || m2 <= 0.0) {
        throw DomainError("component masses must be positive");
    }
    DerivedParams d{};
    d.total_mass = m1 + m2;
    d.symmetric_mass_ratio = m1 * m2 / (d.total_mass * d.total_mass);
    d.chirp_mass = std::pow(d.symmetric_mass_ratio, 0.6) * d.total_mass;

    const double eta = d.symmetric_mass_ratio;
    const double f1 = m1 / d.total_mass;
    const double f2 = m2 / d.total_mass;
    d.spin_orbit = (chi1z * (113.0 * f1 * f1 + 75.0 * eta) +
                    chi2z * (113.0 * f2 * f2 + 75.0 * eta)) /
                   12.0;
    d.spin_spin = eta / 48.0 * (721.0 - 247.0) * chi1z * chi2z;
    return d;
}

DerivedParams derived_params(const WaveformParams &params) {
    return derived_params(params.m1, params.m2, params.chi1z, params.chi2z);
}

AntennaProjection antenna_projection(double f_plus, double f_cross, double iota) {
    const double cos_iota = std::cos(iota);
    const double a_plus = f_plus * (1.0 + cos_iota * cos_iota) / 2.0;
    const double a_cross = f_cross * cos_iota;
    return AntennaProjection{std::hypot(a_plus, a_cross), std::atan2(a_cross, a_plus)};
}

double amplitude_newtonian(double f, const WaveformParams &params, bool normalized) {
    if (f <= 0.0) {
        throw DomainError("frequency must be positive");
    }
    const double power = std::pow(f, -7.0 / 6.0);
    if (normalized) {
        return power;
    }
    const auto d = derived_params(params);
    const auto proj = antenna_projection(params.f_plus, params.f_cross, params.iota);
    return proj.q_factor * std::pow(d.chirp_mass, 5.0 / 6.0) / params.distance * power;
}

double phase_2pn(double f, const WaveformParams &params, PnOrder order) {
    if (f <= 0.0) {
        throw DomainError("frequency must be positive");
    }
    params.validate();
    const auto d = derived_params(params);
    const double eta = d.symmetric_mass_ratio;
    const double chirp_s = d.chirp_mass * kSolarMassSeconds;
    const double total_s = d.total_mass * kSolarMassSeconds;
    const double x = kPi * total_s * f;

    double bracket = 1.0;
    if (order >= PnOrder::pn1) {
        bracket += 20.0 / 9.0 * (743.0 / 336.0 + 11.0 / 4.0 * eta) * std::pow(x, 2.0 / 3.0);
    }
    if (order >= PnOrder::pn15) {
        bracket -= 4.0 * (4.0 * kPi - d.spin_orbit) * x;
    }
    if (order >= PnOrder::pn2) {
        bracket += 10.0 *
                   (3058673.0 / 1016064.0 + 5429.0 / 1008.0 * eta + 617.0 / 144.0 * eta * eta -
                    d.spin_spin) *
                   std::pow(x, 4.0 / 3.0);
    }
    return 2.0 * kPi * f * params.t_c - params.phi_c - kPi / 4.0 +
           3.0 / 128.0 * std::pow(kPi * chirp_s * f, -5.0 / 3.0) * bracket;
}

double dfdt_2pn(double f, const WaveformParams &params, PnOrder order) {
    if (f <= 0.0) {
        throw DomainError("frequency must be positive");
    }
    params.validate();
    const auto d = derived_params(params);
    const double eta = d.symmetric_mass_ratio;
    const double chirp_s = d.chirp_mass * kSolarMassSeconds;
    const double total_s = d.total_mass * kSolarMassSeconds;
    const double x = kPi * total_s * f;

    double bracket = 1.0;
    if (order >= PnOrder::pn1) {
        bracket -= (743.0 / 336.0 + 11.0 / 4.0 * eta) * std::pow(x, 2.0 / 3.0);
    }
    if (order >= PnOrder::pn15) {
        bracket += (4.0 * kPi - d.spin_orbit) * x;
    }
    if (order >= PnOrder::pn2) {
        bracket += (34103.0 / 18144.0 + 13661.0 / 2016.0 * eta + 59.0 / 18.0 * eta * eta +
                    d.spin_spin) *
                   std::pow(x, 4.0 / 3.0);
    }
    return 96.0 / (5.0 * kPi * chirp_s * chirp_s) * std::pow(kPi * chirp_s * f, 11.0 / 3.0) *
           bracket;
}

FrequencyGrid frequency_grid(double f_min, double f_max, int n) {
    if (!(f_max > f_min) || f_min <= 0.0) {
        throw ConfigError("need f_max > f_min > 0");
    }
    if (n < 1) {
        throw ConfigError("need at least one frequency qubit");
    }
    FrequencyGrid grid;
    grid.f_min = f_min;
    grid.f_max = f_max;
    grid.n = n;
    grid.delta_f = (f_max - f_min) / static_cast<double>(1ULL << n);
    grid.duration = 1.0 / grid.delta_f;
    grid.integer_bits =
        static_cast<int>(std::ceil(std::log2(static_cast<double>(1ULL << n) * grid.delta_f)));
    grid.precision_bits = n - grid.integer_bits;
    return grid;
}

std::vector<std::complex<double>> target_state(const WaveformParams &params,
                                               const FrequencyGrid &grid, MassMode mode) {
    params.validate();
    const std::uint64_t bins = grid.bins();
    std::vector<std::complex<double>> state(bins);
    double norm_sq = 0.0;
    for (std::uint64_t j = 0; j < bins; ++j) {
        const double f_lo = grid.bin_edge(j);
        const double f_hi = grid.bin_edge(j + 1);
        double magnitude;
        if (mode == MassMode::bin_integral) {
            magnitude = amplitude_bin_integral(f_lo, f_hi);
        } else {
            magnitude = std::pow(0.5 * (f_lo + f_hi), -7.0 / 6.0) * grid.delta_f;
        }
        const double phase = phase_2pn(f_lo, params);
        state[j] = std::polar(magnitude, phase);
        norm_sq += magnitude * magnitude;
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (auto &amp : state) {
        amp *= inv_norm;
    }
    return state;
}

std::vector<double> target_masses(const WaveformParams &params, const FrequencyGrid &grid,
                                  MassMode mode) {
    const auto state = target_state(params, grid, mode);
    std::vector<double> masses(state.size());
    for (std::size_t j = 0; j < state.size(); ++j) {
        masses[j] = std::norm(state[j]);
    }
    return masses;
}

void write_target_csv(const std::string &path, const FrequencyGrid &grid,
                      const std::vector<std::complex<double>> &state) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << "bin,f,re,im\n";
    char buf[128];
    for (std::size_t j = 0; j < state.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g", j,
                      grid.bin_edge(static_cast<std::uint64_t>(j)), state[j].real(),
                      state[j].imag());
        out << buf << '\n';
    }
}

std::string params_to_json(const WaveformParams &p) {
    nlohmann::json j;
    j["m1_msun"] = p.m1;
    j["m2_msun"] = p.m2;
    j["chi1z"] = p.chi1z;
    j["chi2z"] = p.chi2z;
    j["t_c_s"] = p.t_c;
    j["phi_c_rad"] = p.phi_c;
    j["distance"] = p.distance;
    j["f_plus"] = p.f_plus;
    j["f_cross"] = p.f_cross;
    j["iota_rad"] = p.iota;
    return j.dump(2);
}

WaveformParams params_from_json(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    WaveformParams p;
    p.m1 = j.at("m1_msun").get<double>();
    p.m2 = j.at("m2_msun").get<double>();
    p.chi1z = j.value("chi1z", 0.0);
    p.chi2z = j.value("chi2z", 0.0);
    p.t_c = j.value("t_c_s", 0.0);
    p.phi_c = j.value("phi_c_rad", 0.0);
    p.distance = j.value("distance", 1.0);
    p.f_plus = j.value("f_plus", 1.0);
    p.f_cross = j.value("f_cross", 0.0);
    p.iota = j.value("iota_rad", 0.0);
    return p;
}

} // namespace qgw::waveform
