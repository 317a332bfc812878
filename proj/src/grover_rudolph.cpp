#include "qgw/grover_rudolph.hpp"

#include "qgw/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace qgw::grover_rudolph {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

int log2_size(std::size_t size) {
    if (size == 0 || (size & (size - 1)) != 0) {
        throw ConfigError("probability mass array length must be a power of two");
    }
    return std::countr_zero(size);
}

/// Uniformly controlled Ry through the Gray-code walk: 2^k rotations and
/// 2^k CNOTs for k controls.
void apply_ucry(Statevector &sv, std::span<const std::uint32_t> controls, std::uint32_t target,
                std::span<const double> angles) {
    const int k = static_cast<int>(controls.size());
    if (angles.size() != (1ULL << k)) {
        throw ConfigError("multiplexed rotation needs 2^k angles");
    }
    if (k == 0) {
        sv.apply_ry(angles[0], target);
        return;
    }
    const std::size_t count = angles.size();
    std::vector<double> transformed(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t gray = i ^ (i >> 1);
        double acc = 0.0;
        for (std::size_t b = 0; b < count; ++b) {
            acc += (std::popcount(gray & b) & 1U) ? -angles[b] : angles[b];
        }
        transformed[i] = acc / static_cast<double>(count);
    }
    for (std::size_t i = 0; i < count; ++i) {
        sv.apply_ry(transformed[i], target);
        const std::uint64_t gray = i ^ (i >> 1);
        const std::uint64_t next = (i + 1 < count) ? ((i + 1) ^ ((i + 1) >> 1)) : 0ULL;
        const std::uint32_t ctrl = controls[static_cast<std::size_t>(
            std::countr_zero(gray ^ next))];
        const std::uint32_t cs[] = {ctrl};
        sv.apply_x(target, cs);
    }
}

} // namespace

std::vector<double> split_angle_table(std::span<const double> p_mass, int level) {
    const int n = log2_size(p_mass.size());
    if (level < 0 || level >= n) {
        throw ConfigError("split level must lie in [0, n)");
    }
    for (double p : p_mass) {
        if (p < 0.0) {
            throw DomainError("probability masses must be nonnegative");
        }
    }
    const std::size_t bins = 1ULL << level;
    const std::size_t stride = p_mass.size() >> level;
    std::vector<double> angles(bins);
    for (std::size_t j = 0; j < bins; ++j) {
        const std::size_t lo = j * stride;
        double left = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < stride; ++i) {
            total += p_mass[lo + i];
            if (i < stride / 2) {
                left += p_mass[lo + i];
            }
        }
        if (total <= 0.0) {
            angles[j] = kQuarterPi;
        } else {
            angles[j] = std::acos(std::sqrt(std::clamp(left / total, 0.0, 1.0)));
        }
    }
    return angles;
}

void small_m_prepare(Statevector &sv, const Register &freq, std::span<const double> p_mass,
                     int m_a) {
    const int n = log2_size(p_mass.size());
    if (freq.width() < n) {
        throw ConfigError("frequency register narrower than the mass grid");
    }
    if (m_a < 0 || m_a > n) {
        throw ConfigError("m_a must lie in [0, n]");
    }
    // Level m refines the top m bits of the bin index: it conditions on the
    // high qubits [n - m, n) and rotates qubit n - 1 - m.
    for (int level = 0; level < m_a; ++level) {
        const auto zetas = split_angle_table(p_mass, level);
        std::vector<double> angles(zetas.size());
        for (std::size_t j = 0; j < zetas.size(); ++j) {
            angles[j] = 2.0 * zetas[j];
        }
        const std::span<const std::uint32_t> controls(
            freq.qubits.data() + (n - level), static_cast<std::size_t>(level));
        apply_ucry(sv, controls, freq.qubits[static_cast<std::size_t>(n - 1 - level)], angles);
    }
}

void GRConfig::validate(int n) const {
    if (m_a < 0 || m_a > m_b || m_b > n) {
        throw ConfigError("need 0 <= m_a <= m_b <= n");
    }
    if (n_l < 0) {
        throw ConfigError("n_l must be nonnegative");
    }
    coeff_fmt.validate();
    angle_fmt.validate();
}

minimax::PwlSpec fit_split_angles(std::span<const double> p_mass, int level, int n_l,
                                  const FixedPointFormat &coeff_fmt, int grid_density) {
    const auto zetas = split_angle_table(p_mass, level);
    const int n_l_eff = std::min(n_l, level);
    const double hi = static_cast<double>(1ULL << level);
    // Linear interpolation between the integer samples; constant beyond the
    // last code.
    auto interp = [zetas](double x) {
        if (x <= 0.0) {
            return zetas.front();
        }
        const double last = static_cast<double>(zetas.size() - 1);
        if (x >= last) {
            return zetas.back();
        }
        const auto j = static_cast<std::size_t>(x);
        const double t = x - static_cast<double>(j);
        return (1.0 - t) * zetas[j] + t * zetas[j + 1];
    };
    return minimax::build_pwl_spec(interp, 0.0, hi, n_l_eff, coeff_fmt, grid_density);
}

void gr_step(Statevector &sv, const Register &freq, const OracleRegisters &aux,
             const minimax::PwlSpec &spec, int level, const GRConfig &config) {
    if (level < 1 || level >= freq.width()) {
        throw ConfigError("oracle level must lie in [1, n)");
    }
    const int n = freq.width();
    qarith::PwlOracleLayout layout;
    layout.x.qubits.assign(freq.qubits.begin() + (n - level), freq.qubits.end());
    layout.x_fmt = fixedpoint::make_unsigned(level, 0);
    layout.out = aux.out;
    layout.out_fmt = config.angle_fmt;
    layout.coeff = aux.coeff;
    layout.coeff_fmt = config.coeff_fmt;
    const int n_l_eff = spec.n_l;
    if (aux.label.width() < n_l_eff) {
        throw ConfigError("label register narrower than the fitted subdomain count");
    }
    layout.label.qubits.assign(aux.label.qubits.begin(), aux.label.qubits.begin() + n_l_eff);

    const auto program = qarith::compile_pwl_program(spec);
    const auto circuit = qarith::build_pwl(layout, program);
    run(sv, circuit);

    // Rotation by twice the stored angle, one controlled Ry per angle bit.
    const auto &fmt = config.angle_fmt;
    const std::uint32_t target = freq.qubits[static_cast<std::size_t>(n - 1 - level)];
    for (int i = 0; i < fmt.n_bits; ++i) {
        double weight = std::ldexp(1.0, i - fmt.p);
        if (i == fmt.n_bits - 1) {
            weight = -weight; // two's-complement sign bit
        }
        const std::uint32_t cs[] = {aux.out.qubits[static_cast<std::size_t>(i)]};
        sv.apply_ry(2.0 * weight, target, cs);
    }

    run(sv, circuit.inverted());
}

std::vector<LevelReport> gr_prepare(Statevector &sv, const Register &freq,
                                    const OracleRegisters &aux, std::span<const double> p_mass,
                                    const GRConfig &config) {
    const int n = log2_size(p_mass.size());
    if (freq.width() != n) {
        throw ConfigError("frequency register width does not match the mass grid");
    }
    config.validate(n);

    std::vector<LevelReport> reports;
    std::uint64_t last = sv.tally().cnot_count();
    auto close_report = [&](int level, double err) {
        const std::uint64_t now = sv.tally().cnot_count();
        reports.push_back(LevelReport{level, err, now - last});
        last = now;
    };

    if (config.m_a > 0) {
        small_m_prepare(sv, freq, p_mass, config.m_a);
        close_report(config.m_a - 1, 0.0);
    }
    for (int level = config.m_a; level < config.m_b; ++level) {
        if (level == 0) {
            // A single subdomain and an empty input register: the oracle
            // degenerates to one rotation by the quantized constant angle.
            const double zeta =
                fixedpoint::quantize(split_angle_table(p_mass, 0)[0], config.angle_fmt);
            sv.apply_ry(2.0 * zeta, freq.qubits[static_cast<std::size_t>(n - 1)]);
            close_report(0, 0.0);
            continue;
        }
        const auto spec =
            fit_split_angles(p_mass, level, config.n_l, config.coeff_fmt, config.grid_density);
        gr_step(sv, freq, aux, spec, level, config);
        close_report(level, spec.max_err_inf());
    }
    for (int level = config.m_b; level < n; ++level) {
        sv.apply_h(freq.qubits[static_cast<std::size_t>(n - 1 - level)]);
        close_report(level, 0.0);
    }
    return reports;
}

} // namespace qgw::grover_rudolph
