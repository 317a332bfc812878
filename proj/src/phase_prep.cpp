#include "qgw/phase_prep.hpp"

#include "qgw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qgw::phase_prep {

namespace {

using minimax::SubdomainFit;

double round_to_format(double v, const FixedPointFormat &fmt) {
    return fixedpoint::decode(fixedpoint::encode(v, fmt), fmt);
}

} // namespace

void PhaseConfig::validate() const {
    ancilla_fmt.validate();
    coeff_fmt.validate();
    if (ancilla_fmt.representation != fixedpoint::Representation::twos_complement ||
        coeff_fmt.representation != fixedpoint::Representation::twos_complement) {
        throw ConfigError("phase registers must be two's complement");
    }
    if (ancilla_fmt.p > ancilla_fmt.n_bits) {
        throw ConfigError("ancilla precision bits cannot exceed the register width");
    }
    if (n_l < 0) {
        throw ConfigError("n_l must be nonnegative");
    }
}

double cycle_distance(double a, double b) {
    double d = std::fmod(a - b, 1.0);
    if (d < -0.5) {
        d += 1.0;
    }
    if (d >= 0.5) {
        d -= 1.0;
    }
    return std::abs(d);
}

PhaseOracle fit_phase_cycles(const PhaseCycleFn &psi_cycles, int n, const PhaseConfig &config) {
    config.validate();
    const int n_l_eff = std::min(config.n_l, n);
    const int subdomains = 1 << n_l_eff;
    const double hi = static_cast<double>(1ULL << n);

    PhaseOracle oracle;
    auto &spec = oracle.spec;
    spec.x_lo = 0.0;
    spec.x_hi = hi;
    spec.n_l = n_l_eff;
    spec.coeff_fmt = config.coeff_fmt;
    spec.boundaries.resize(static_cast<std::size_t>(subdomains) + 1);
    for (int k = 0; k <= subdomains; ++k) {
        spec.boundaries[static_cast<std::size_t>(k)] =
            hi * static_cast<double>(k) / static_cast<double>(subdomains);
    }

    for (int k = 0; k < subdomains; ++k) {
        const double lo = spec.boundaries[static_cast<std::size_t>(k)];
        const double up = spec.boundaries[static_cast<std::size_t>(k) + 1];
        const auto fit = minimax::fit_linear_minimax(psi_cycles, lo, up, config.grid_density);

        double slope_shift = 0.0;
        double intercept_shift = 0.0;
        if (config.wrap) {
            // Integer reductions change every applied phase by full turns
            // only (the input codes are integers), so they are free.
            slope_shift = std::round(fit.slope);
            intercept_shift = std::round(fit.intercept);
        }
        const double slope_target = fit.slope - slope_shift;
        auto reduced = [&](double x) {
            return psi_cycles(x) - slope_shift * x - intercept_shift;
        };
        SubdomainFit q;
        try {
            q = minimax::quantize_linear_fit(reduced, lo, up, slope_target, config.coeff_fmt,
                                             config.grid_density);
        } catch (const RangeError &) {
            throw RangeError("phase coefficient of subdomain " + std::to_string(k) +
                             " overflows the coefficient format");
        }
        // Keep the stored intercept inside the coefficient range.
        if (config.wrap) {
            const double lo_v = config.coeff_fmt.min_value();
            const double span = std::ldexp(1.0, config.coeff_fmt.integer_bits() + 1);
            while (q.intercept >= lo_v + span) {
                q.intercept -= span;
            }
            while (q.intercept < lo_v) {
                q.intercept += span;
            }
            q.intercept = round_to_format(q.intercept, config.coeff_fmt);
        }
        spec.fits.push_back(q);
    }
    oracle.fit_err_inf = spec.max_err_inf();
    oracle.program = qarith::compile_pwl_program(spec);
    return oracle;
}

void psi_prime_oracle(Statevector &sv, const Register &freq, const OracleRegisters &aux,
                      const PhaseOracle &oracle, const PhaseConfig &config, bool inverse) {
    qarith::PwlOracleLayout layout;
    layout.x = freq;
    layout.x_fmt = fixedpoint::make_unsigned(freq.width(), 0);
    layout.out = aux.out;
    layout.out_fmt = config.ancilla_fmt;
    layout.coeff = aux.coeff;
    layout.coeff_fmt = config.coeff_fmt;
    if (aux.label.width() < oracle.spec.n_l) {
        throw ConfigError("label register narrower than the fitted subdomain count");
    }
    layout.label.qubits.assign(aux.label.qubits.begin(),
                               aux.label.qubits.begin() + oracle.spec.n_l);
    run(sv, qarith::build_pwl(layout, oracle.program, inverse));
}

void precision_rotations(Statevector &sv, const Register &ancilla, const FixedPointFormat &fmt) {
    if (ancilla.width() != fmt.n_bits) {
        throw ConfigError("ancilla register width does not match its format");
    }
    sim::Block block;
    block.tag = "phase-ladder";
    std::vector<std::complex<double>> table(1ULL << fmt.n_bits, 1.0);
    for (int i = 0; i < fmt.n_bits; ++i) {
        if (i - fmt.p >= 0) {
            continue; // integer weight, full turns only
        }
        double w = std::ldexp(1.0, i - fmt.p);
        if (i == fmt.n_bits - 1) {
            w = -w;
        }
        block.gates.push_back(sim::Gate::phase(2.0 * std::numbers::pi * w,
                                               ancilla.qubits[static_cast<std::size_t>(i)]));
        for (std::uint64_t code = 0; code < table.size(); ++code) {
            if ((code >> i) & 1ULL) {
                table[code] *= std::polar(1.0, 2.0 * std::numbers::pi * w);
            }
        }
    }
    sim::DiagSemantics sem;
    sem.reg = ancilla;
    sem.table = std::move(table);
    block.semantics = std::move(sem);
    sim::Circuit c;
    c.push(std::move(block));
    run(sv, c);
}

PhaseReport phase_prepare(Statevector &sv, const Register &freq, const OracleRegisters &aux,
                          const PhaseCycleFn &psi_cycles, const PhaseConfig &config,
                          bool collect_diagnostics) {
    const auto oracle = fit_phase_cycles(psi_cycles, freq.width(), config);
    PhaseReport report;
    report.fit_err_inf = oracle.fit_err_inf;

    const std::uint64_t before = sv.tally().cnot_count();
    psi_prime_oracle(sv, freq, aux, oracle, config);
    report.cnots_forward_oracle = sv.tally().cnot_count() - before;

    if (collect_diagnostics) {
        const std::uint64_t bins = 1ULL << freq.width();
        const std::uint64_t codes = 1ULL << aux.out.width();
        report.stored_cycles.resize(bins);
        for (std::uint64_t j = 0; j < bins; ++j) {
            const std::uint64_t base = freq.deposit(j);
            std::uint64_t best_code = 0;
            double best_mass = -1.0;
            for (std::uint64_t c = 0; c < codes; ++c) {
                const double mass = std::norm(sv.amplitude(base | aux.out.deposit(c)));
                if (mass > best_mass) {
                    best_mass = mass;
                    best_code = c;
                }
            }
            const double stored = fixedpoint::decode(best_code, config.ancilla_fmt);
            report.stored_cycles[j] = stored;
            report.max_delta_psi = std::max(
                report.max_delta_psi, cycle_distance(stored, psi_cycles(static_cast<double>(j))));
        }
    }

    precision_rotations(sv, aux.out, config.ancilla_fmt);
    psi_prime_oracle(sv, freq, aux, oracle, config, true);
    return report;
}

} // namespace qgw::phase_prep
