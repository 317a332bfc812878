#include "qgw/pipeline.hpp"

#include "qgw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace qgw::pipeline {

namespace {

using grover_rudolph::OracleRegisters;
using sim::Register;
using sim::Statevector;

struct StageLayout {
    Register freq;
    OracleRegisters aux;
};

/// Frequency register on top, output register at the bottom so the fiber
/// sweeps of the arithmetic blocks stream contiguously.
StageLayout stage_layout(int n, int n_o, int n_l, int n_c, int total) {
    if (n_o + n_l + n_c + n > total) {
        throw ConfigError("stage layout exceeds the qubit budget");
    }
    StageLayout l;
    l.aux.out = Register::range(0, n_o);
    l.aux.label = Register::range(static_cast<std::uint32_t>(n_o), n_l);
    l.aux.coeff = Register::range(static_cast<std::uint32_t>(n_o + n_l), n_c);
    l.freq = Register::range(static_cast<std::uint32_t>(total - n), n);
    return l;
}

double amplitude_fidelity(const std::vector<std::complex<double>> &freq_state,
                          const std::vector<double> &target_mass) {
    std::complex<double> inner = 0.0;
    for (std::size_t j = 0; j < freq_state.size(); ++j) {
        inner += std::conj(freq_state[j]) * std::sqrt(target_mass[j]);
    }
    return std::norm(inner);
}

grover_rudolph::GRConfig gr_config_of(const PrepSettings &s) {
    grover_rudolph::GRConfig config;
    config.m_a = s.gr_m_a;
    config.m_b = s.gr_m_b;
    config.n_l = s.gr_n_l;
    config.coeff_fmt = fixedpoint::make_twos_complement(s.gr_n_c, s.gr_n_c - 1);
    config.angle_fmt = fixedpoint::make_twos_complement(s.gr_n_o, s.gr_n_o - 1);
    config.grid_density = s.grid_density;
    return config;
}

/// Shared skeleton of the preparation pipelines: build the ancilla-free part
/// of the amplitude stage on an n-qubit state, widen it only if an oracle
/// stage needs the arithmetic registers, then optionally run phase loading.
PrepReport run_pipeline(const PrepSettings &settings, bool with_phase, bool needs_amp_oracle,
                        const std::function<Statevector()> &small_state,
                        const std::function<std::vector<grover_rudolph::LevelReport>(
                            Statevector &, const StageLayout &)> &oracle_levels) {
    settings.params.validate();
    const auto grid = waveform::frequency_grid(settings.f_min, settings.f_max, settings.n);
    const auto target = waveform::target_state(settings.params, grid, settings.mass_mode);
    const auto masses = waveform::target_masses(settings.params, grid, settings.mass_mode);

    const int n = settings.n;
    int total = n;
    if (needs_amp_oracle) {
        total = std::max(total, n + settings.gr_n_o + settings.gr_n_l + settings.gr_n_c);
    }
    if (with_phase) {
        total = std::max(total, n + settings.ph_n_a + settings.ph_n_l + settings.ph_n_c);
    }
    const sim::Precision precision = settings.precision.value_or(
        total <= 27 ? sim::Precision::f64 : sim::Precision::f32);

    PrepReport report;
    report.total_qubits = total;
    report.precision = precision == sim::Precision::f64 ? "double" : "single";
    report.target = target;

    Statevector small = small_state();
    std::uint64_t carried_cnots = 0;
    Statevector sv = [&] {
        if (total == n) {
            return std::move(small);
        }
        carried_cnots = small.tally().cnot_count();
        auto wide = Statevector::init(total, precision);
        wide.embed(small, Register::range(static_cast<std::uint32_t>(total - n), n));
        return wide;
    }();

    if (needs_amp_oracle) {
        const auto layout =
            stage_layout(n, settings.gr_n_o, settings.gr_n_l, settings.gr_n_c, total);
        report.gr_levels = oracle_levels(sv, layout);
    }
    report.cnots_amplitude = carried_cnots + sv.tally().cnot_count();

    const auto freq = Register::range(static_cast<std::uint32_t>(total - n), n);
    {
        const auto freq_state = sv.extract_register_state(freq);
        report.fidelity_amplitude = amplitude_fidelity(freq_state, masses);
        report.mismatch_amplitude = sim::mismatch_from_fidelity(report.fidelity_amplitude);
        if (!with_phase) {
            report.state = freq_state;
            report.ancilla_residual =
                total == n ? 0.0
                           : sv.residual_mass_outside_zero({Register::range(
                                 0, total - n)});
        }
    }

    if (with_phase) {
        const auto layout =
            stage_layout(n, settings.ph_n_a, settings.ph_n_l, settings.ph_n_c, total);
        phase_prep::PhaseConfig config;
        config.ancilla_fmt =
            fixedpoint::make_twos_complement(settings.ph_n_a, settings.ph_n_a - 1);
        config.coeff_fmt =
            fixedpoint::make_twos_complement(settings.ph_n_c, settings.ph_n_c - 1);
        config.n_l = settings.ph_n_l;
        config.wrap = settings.ph_wrap;
        config.grid_density = settings.grid_density;

        const auto params = settings.params;
        auto psi_cycles = [params, grid](double j) {
            return waveform::phase_2pn(grid.f_min + grid.delta_f * j, params) /
                   (2.0 * std::numbers::pi);
        };
        const auto ph_report =
            phase_prep::phase_prepare(sv, layout.freq, layout.aux, psi_cycles, config, true);
        report.max_delta_psi = ph_report.max_delta_psi;
        report.cnots_phase_oracle = ph_report.cnots_forward_oracle;

        report.ancilla_residual = sv.residual_mass_outside_zero(
            {layout.aux.out, layout.aux.label, layout.aux.coeff});
        report.state = sv.extract_register_state(layout.freq);
        report.fidelity_full = sim::fidelity(report.state, target);
        report.mismatch_full = sim::mismatch_from_fidelity(report.fidelity_full);
    }

    report.cnots_total = carried_cnots + sv.tally().cnot_count();
    return report;
}

PrepReport run_grover_rudolph(const PrepSettings &settings, bool with_phase) {
    const auto grid = waveform::frequency_grid(settings.f_min, settings.f_max, settings.n);
    const auto masses = waveform::target_masses(settings.params, grid, settings.mass_mode);
    const auto config = gr_config_of(settings);
    config.validate(settings.n);
    if (config.m_a == 0 && config.m_b > 0) {
        throw ConfigError("the pipeline needs m_a >= 1 (level 0 has no oracle input)");
    }

    auto small_state = [&] {
        auto sv = Statevector::init(settings.n);
        const auto freq = Register::range(0, settings.n);
        grover_rudolph::small_m_prepare(sv, freq, masses, config.m_a);
        for (int level = config.m_b; level < settings.n; ++level) {
            sv.apply_h(freq.qubits[static_cast<std::size_t>(settings.n - 1 - level)]);
        }
        return sv;
    };
    auto oracle_levels = [&](Statevector &sv, const StageLayout &layout) {
        std::vector<grover_rudolph::LevelReport> reports;
        for (int level = config.m_a; level < config.m_b; ++level) {
            const std::uint64_t before = sv.tally().cnot_count();
            const auto spec = grover_rudolph::fit_split_angles(
                masses, level, config.n_l, config.coeff_fmt, config.grid_density);
            grover_rudolph::gr_step(sv, layout.freq, layout.aux, spec, level, config);
            reports.push_back(grover_rudolph::LevelReport{level, spec.max_err_inf(),
                                                          sv.tally().cnot_count() - before});
        }
        return reports;
    };
    return run_pipeline(settings, with_phase, config.m_a < config.m_b, small_state,
                        oracle_levels);
}

} // namespace

PrepReport prepare_grover_rudolph(const PrepSettings &settings) {
    return run_grover_rudolph(settings, true);
}

PrepReport prepare_amplitude_only(const PrepSettings &settings) {
    return run_grover_rudolph(settings, false);
}

PrepReport prepare_pqc(const PrepSettings &settings, std::span<const double> pqc_params,
                       int layers) {
    std::vector<double> params(pqc_params.begin(), pqc_params.end());
    const int n = settings.n;
    auto small_state = [params, n, layers] { return qgan::pqc_apply(params, n, layers); };
    auto oracle_levels = [](Statevector &, const StageLayout &) {
        return std::vector<grover_rudolph::LevelReport>{};
    };
    return run_pipeline(settings, true, false, small_state, oracle_levels);
}

} // namespace qgw::pipeline
