#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qgw::waveform {

/// Geometric-unit conversion: seconds per solar mass (G M_sun / c^3).
inline constexpr double kSolarMassSeconds = 4.92549e-6;

/// Physical source parameters. Masses in solar masses, aligned dimensionless
/// spins, coalescence time/phase, distance in arbitrary units (normalization
/// removes it), detector responses and inclination for the projection.
struct WaveformParams {
    double m1 = 35.0;
    double m2 = 30.0;
    double chi1z = 0.0;
    double chi2z = 0.0;
    double t_c = 0.0;
    double phi_c = 0.0;
    double distance = 1.0;
    double f_plus = 1.0;
    double f_cross = 0.0;
    double iota = 0.0;

    void validate() const;
};

struct DerivedParams {
    double total_mass;           // M, solar masses
    double symmetric_mass_ratio; // dimensionless m1 m2 / M^2
    double chirp_mass;           // eta^{3/5} M, solar masses
    double spin_orbit;           // beta
    double spin_spin;            // sigma
};

DerivedParams derived_params(double m1, double m2, double chi1z, double chi2z);
DerivedParams derived_params(const WaveformParams &params);

struct AntennaProjection {
    double q_factor; // Q = sqrt(A_+^2 + A_x^2)
    double phi0;     // atan2(A_x, A_+)
};

AntennaProjection antenna_projection(double f_plus, double f_cross, double iota);

/// Newtonian frequency-domain amplitude Q M_c^{5/6} f^{-7/6} / D, or the bare
/// f^{-7/6} power law when normalized.
double amplitude_newtonian(double f, const WaveformParams &params, bool normalized = false);

/// Truncation order of the post-Newtonian bracket.
enum class PnOrder { newtonian, pn1, pn15, pn2 };

/// Frequency-domain phase to second post-Newtonian order.
double phase_2pn(double f, const WaveformParams &params, PnOrder order = PnOrder::pn2);

/// Time-frequency evolution df/dt to second post-Newtonian order.
double dfdt_2pn(double f, const WaveformParams &params, PnOrder order = PnOrder::pn2);

/// Binary frequency discretisation and the implied fixed-point split of a
/// frequency value: integer_bits = ceil(log2(2^n delta_f)) and
/// precision_bits = n - integer_bits (= ceil(log2 T) whenever the grid is
/// power-of-two compatible).
struct FrequencyGrid {
    double f_min = 0.0;
    double f_max = 0.0;
    int n = 0;
    double delta_f = 0.0;
    double duration = 0.0; // T = 1/delta_f
    int integer_bits = 0;
    int precision_bits = 0;

    double bin_edge(std::uint64_t j) const { return f_min + delta_f * static_cast<double>(j); }
    std::uint64_t bins() const { return 1ULL << n; }
};

FrequencyGrid frequency_grid(double f_min, double f_max, int n);

enum class MassMode { bin_integral, midpoint };

/// Unit-norm amplitude-encoded target: magnitude from the Newtonian amplitude
/// aggregated per mass_mode, phase from the 2PN phase at the bin lower edge.
std::vector<std::complex<double>> target_state(const WaveformParams &params,
                                               const FrequencyGrid &grid,
                                               MassMode mode = MassMode::bin_integral);

/// Normalized probability masses |target amplitude|^2 (the Grover-Rudolph and
/// QGAN target distribution).
std::vector<double> target_masses(const WaveformParams &params, const FrequencyGrid &grid,
                                  MassMode mode = MassMode::bin_integral);

/// CSV columns: bin,f,re,im.
void write_target_csv(const std::string &path, const FrequencyGrid &grid,
                      const std::vector<std::complex<double>> &state);

std::string params_to_json(const WaveformParams &params);
WaveformParams params_from_json(const std::string &text);

} // namespace qgw::waveform
