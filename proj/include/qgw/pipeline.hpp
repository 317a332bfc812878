#pragma once

#include "qgw/gatecost.hpp"
#include "qgw/grover_rudolph.hpp"
#include "qgw/phase_prep.hpp"
#include "qgw/qgan.hpp"
#include "qgw/statevector.hpp"
#include "qgw/waveform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qgw::pipeline {

/// Register widths of the two oracle stages. The frequency register sits on
/// the top qubits; the amplitude stage and the phase stage repartition the
/// ancilla qubits below it.
struct PrepSettings {
    waveform::WaveformParams params;
    double f_min = 40.0;
    double f_max = 168.0;
    int n = 6;
    waveform::MassMode mass_mode = waveform::MassMode::bin_integral;

    // Grover-Rudolph amplitude stage
    int gr_m_a = 5;
    int gr_m_b = 6;
    int gr_n_l = 4;
    int gr_n_c = 9;
    int gr_n_o = 9;

    // Phase stage
    int ph_n_l = 4;
    int ph_n_c = 8;
    int ph_n_a = 10;
    bool ph_wrap = true;

    gatecost::AncillaPolicy policy = gatecost::AncillaPolicy::none;
    /// Unset: double up to 27 total qubits, single above.
    std::optional<sim::Precision> precision;
    int grid_density = 512;
    /// Echoed only; the sampling-interval constant of the reference setup.
    double delta_t_echo = 0.02;
};

struct PrepReport {
    double fidelity_amplitude = 0.0;
    double mismatch_amplitude = 1.0;
    double fidelity_full = 0.0;
    double mismatch_full = 1.0;
    double max_delta_psi = 0.0;
    double ancilla_residual = 0.0;
    std::uint64_t cnots_amplitude = 0;
    std::uint64_t cnots_phase_oracle = 0;
    std::uint64_t cnots_total = 0;
    int total_qubits = 0;
    std::string precision = "double";
    std::vector<grover_rudolph::LevelReport> gr_levels;
    /// Final frequency-register amplitudes (ancillas traced at |0>).
    std::vector<std::complex<double>> state;
    std::vector<std::complex<double>> target;
};

/// Amplitude loading via Grover-Rudolph followed by phase loading.
PrepReport prepare_grover_rudolph(const PrepSettings &settings);

/// Amplitude loading via a trained ansatz followed by phase loading.
PrepReport prepare_pqc(const PrepSettings &settings, std::span<const double> pqc_params,
                       int layers);

/// Amplitude stage only (no phase), via Grover-Rudolph.
PrepReport prepare_amplitude_only(const PrepSettings &settings);

} // namespace qgw::pipeline
