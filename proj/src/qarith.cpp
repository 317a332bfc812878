#include "qgw/qarith.hpp"

#include "qgw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qgw::qarith {

namespace {

using fixedpoint::Representation;

void require_arithmetic_format(const FixedPointFormat &fmt, const Register &reg,
                               const char *role, bool allow_signed) {
    fmt.validate();
    if (fmt.n_bits != reg.width()) {
        throw ConfigError(std::string(role) + " format width does not match its register");
    }
    if (fmt.representation == Representation::signed_magnitude) {
        throw ConfigError(std::string(role) + " register cannot use signed magnitude");
    }
    if (!allow_signed && fmt.representation != Representation::unsigned_magnitude) {
        throw ConfigError(std::string(role) + " register must be unsigned");
    }
}

/// Weight exponent of bit k under fmt, and whether it enters negatively.
struct BitWeight {
    int exponent;
    bool negative;
};

BitWeight bit_weight(int k, const FixedPointFormat &fmt) {
    const bool sign_bit =
        fmt.representation == Representation::twos_complement && k == fmt.n_bits - 1;
    return BitWeight{k - fmt.p, sign_bit};
}

void append_controlled_phase(Circuit &c, double angle, std::uint32_t target,
                             std::vector<std::uint32_t> controls) {
    c.push(sim::Gate::phase(angle, target, std::move(controls)));
}

Register scratch_slice(const Register &scratch, int width) {
    Register s;
    s.qubits.assign(scratch.qubits.begin(), scratch.qubits.begin() + width);
    return s;
}

void check_disjoint(std::initializer_list<const Register *> regs, const char *what) {
    std::uint64_t seen = 0;
    for (const auto *r : regs) {
        const std::uint64_t m = r->mask();
        if (seen & m) {
            throw ConfigError(std::string("overlapping registers in ") + what);
        }
        seen |= m;
    }
}

} // namespace

// ---- layout / program ------------------------------------------------------

void PwlOracleLayout::validate() const {
    require_arithmetic_format(x_fmt, x, "input", false);
    require_arithmetic_format(out_fmt, out, "output", true);
    require_arithmetic_format(coeff_fmt, coeff, "coefficient", true);
    if (out_fmt.representation != Representation::twos_complement) {
        throw ConfigError("output register must be two's complement");
    }
    if (coeff_fmt.representation != Representation::twos_complement) {
        throw ConfigError("coefficient register must be two's complement");
    }
    check_disjoint({&x, &out, &coeff, &label}, "oracle layout");
    if (label.width() > 0 && coeff.width() < x.width() + 1) {
        throw ConfigError("coefficient register too narrow to host the comparator scratch "
                          "(need input width + 1 bits)");
    }
}

int PwlProgram::n_l() const {
    int bits = 0;
    while ((1ULL << bits) < slope_codes.size()) {
        ++bits;
    }
    return bits;
}

void PwlProgram::validate(const PwlOracleLayout &layout) const {
    const std::size_t subdomains = 1ULL << layout.label.width();
    if (slope_codes.size() != subdomains || intercept_codes.size() != subdomains) {
        throw ConfigError("coefficient table length does not equal 2^n_l");
    }
    if (thresholds.size() + 1 != subdomains) {
        throw ConfigError("threshold count must be 2^n_l - 1");
    }
    const std::uint64_t x_codes = 1ULL << layout.x.width();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] < 1 || thresholds[i] >= x_codes) {
            throw ConfigError("threshold outside the input code grid");
        }
        if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
            throw ConfigError("thresholds must be strictly ascending");
        }
    }
    for (std::size_t i = 0; i < subdomains; ++i) {
        if ((slope_codes[i] | intercept_codes[i]) >> layout.coeff.width()) {
            throw ConfigError("coefficient code wider than the coefficient register");
        }
    }
}

// ---- builders --------------------------------------------------------------

Circuit build_qft(const Register &reg, bool inverse) {
    if (reg.empty()) {
        throw CircuitError("QFT of an empty register");
    }
    Circuit c;
    const int w = reg.width();
    for (int i = w - 1; i >= 0; --i) {
        c.push(sim::Gate::h(reg.qubits[i]));
        for (int m = i - 1; m >= 0; --m) {
            c.push(sim::Gate::phase(std::numbers::pi / static_cast<double>(1ULL << (i - m)),
                                    reg.qubits[i], {reg.qubits[m]}));
        }
    }
    for (int i = 0; i < w / 2; ++i) {
        c.push(sim::Gate::swap(reg.qubits[i], reg.qubits[w - 1 - i]));
    }
    return inverse ? c.inverted() : c;
}

Circuit build_fourier_const(const Register &target, std::uint64_t addend, bool subtract,
                            std::span<const std::uint32_t> controls) {
    Circuit c;
    const int w = target.width();
    const std::uint64_t mod_mask = (w >= 64) ? ~0ULL : ((1ULL << w) - 1);
    for (int j = 0; j < w; ++j) {
        const std::uint64_t shifted = (addend << j) & mod_mask;
        if (shifted == 0) {
            continue;
        }
        double angle = 2.0 * std::numbers::pi * static_cast<double>(shifted) /
                       static_cast<double>(mod_mask + 1);
        if (subtract) {
            angle = -angle;
        }
        append_controlled_phase(c, angle, target.qubits[j],
                                {controls.begin(), controls.end()});
    }
    return c;
}

Circuit build_fourier_reg(const Register &src, const Register &target, bool subtract,
                          std::span<const std::uint32_t> controls) {
    check_disjoint({&src, &target}, "fourier add");
    Circuit c;
    const int w = target.width();
    for (int k = 0; k < src.width(); ++k) {
        for (int j = 0; j + k < w; ++j) {
            double angle = 2.0 * std::numbers::pi /
                           static_cast<double>(1ULL << (w - k - j));
            if (subtract) {
                angle = -angle;
            }
            std::vector<std::uint32_t> cs{src.qubits[k]};
            cs.insert(cs.end(), controls.begin(), controls.end());
            append_controlled_phase(c, angle, target.qubits[j], std::move(cs));
        }
    }
    return c;
}

std::uint64_t truncated_addend_code(std::uint64_t src_code, const FixedPointFormat &src_fmt,
                                    const FixedPointFormat &out_fmt) {
    const int w = out_fmt.n_bits;
    const std::uint64_t mask = (1ULL << w) - 1;
    std::uint64_t acc = 0;
    for (int k = 0; k < src_fmt.n_bits; ++k) {
        if (!((src_code >> k) & 1ULL)) {
            continue;
        }
        const auto [e, negative] = bit_weight(k, src_fmt);
        const int eo = e + out_fmt.p;
        if (eo < 0 || eo >= w) {
            continue;
        }
        acc = negative ? (acc - (1ULL << eo)) : (acc + (1ULL << eo));
    }
    return acc & mask;
}

std::uint64_t truncated_product_code(std::uint64_t a_code, const FixedPointFormat &a_fmt,
                                     std::uint64_t b_code, const FixedPointFormat &b_fmt,
                                     const FixedPointFormat &out_fmt) {
    const int w = out_fmt.n_bits;
    const std::uint64_t mask = (1ULL << w) - 1;
    std::uint64_t acc = 0;
    for (int i = 0; i < a_fmt.n_bits; ++i) {
        if (!((a_code >> i) & 1ULL)) {
            continue;
        }
        for (int k = 0; k < b_fmt.n_bits; ++k) {
            if (!((b_code >> k) & 1ULL)) {
                continue;
            }
            const auto [eb, negative] = bit_weight(k, b_fmt);
            const int eo = (i - a_fmt.p) + eb + out_fmt.p;
            if (eo < 0 || eo >= w) {
                continue;
            }
            acc = negative ? (acc - (1ULL << eo)) : (acc + (1ULL << eo));
        }
    }
    return acc & mask;
}

Circuit build_add_block(const Register &src, const FixedPointFormat &src_fmt, const Register &out,
                        const FixedPointFormat &out_fmt) {
    require_arithmetic_format(src_fmt, src, "addend", true);
    require_arithmetic_format(out_fmt, out, "output", true);
    check_disjoint({&src, &out}, "adder");

    sim::Block block;
    block.tag = "add";
    Circuit gates = build_qft(out);
    const int w = out.width();
    for (int k = 0; k < src.width(); ++k) {
        const auto [e, negative] = bit_weight(k, src_fmt);
        const int eo = e + out_fmt.p;
        if (eo < 0 || eo >= w) {
            continue;
        }
        for (int j = 0; j + eo < w; ++j) {
            const double angle = (negative ? -2.0 : 2.0) * std::numbers::pi /
                                 static_cast<double>(1ULL << (w - eo - j));
            gates.push(sim::Gate::phase(angle, out.qubits[j], {src.qubits[k]}));
        }
    }
    gates.append(build_qft(out, true));
    for (const auto &op : gates.ops()) {
        block.gates.push_back(std::get<sim::Gate>(op));
    }

    sim::FiberAddSemantics sem;
    sem.target = out;
    sem.ctx = src;
    sem.delta_table.resize(1ULL << src.width());
    for (std::uint64_t cc = 0; cc < sem.delta_table.size(); ++cc) {
        sem.delta_table[cc] = truncated_addend_code(cc, src_fmt, out_fmt);
    }
    block.semantics = std::move(sem);

    Circuit c;
    c.push(std::move(block));
    return c;
}

Circuit build_mult_block(const Register &a, const FixedPointFormat &a_fmt, const Register &b,
                         const FixedPointFormat &b_fmt, const Register &out,
                         const FixedPointFormat &out_fmt) {
    require_arithmetic_format(a_fmt, a, "multiplicand", false);
    require_arithmetic_format(b_fmt, b, "multiplier", true);
    if (b_fmt.representation != Representation::twos_complement) {
        throw ConfigError("multiplier register must be two's complement");
    }
    require_arithmetic_format(out_fmt, out, "product", true);
    check_disjoint({&a, &b, &out}, "multiplier");
    if (a.width() + b.width() > 26) {
        throw ConfigError("multiplier context wider than 26 bits");
    }

    sim::Block block;
    block.tag = "mult";
    Circuit gates = build_qft(out);
    const int w = out.width();
    for (int i = 0; i < a.width(); ++i) {
        for (int k = 0; k < b.width(); ++k) {
            const auto [eb, negative] = bit_weight(k, b_fmt);
            const int eo = (i - a_fmt.p) + eb + out_fmt.p;
            if (eo < 0 || eo >= w) {
                continue;
            }
            for (int j = 0; j + eo < w; ++j) {
                const double angle = (negative ? -2.0 : 2.0) * std::numbers::pi /
                                     static_cast<double>(1ULL << (w - eo - j));
                gates.push(sim::Gate::phase(angle, out.qubits[j], {a.qubits[i], b.qubits[k]}));
            }
        }
    }
    gates.append(build_qft(out, true));
    for (const auto &op : gates.ops()) {
        block.gates.push_back(std::get<sim::Gate>(op));
    }

    Register ctx;
    ctx.qubits = a.qubits;
    ctx.qubits.insert(ctx.qubits.end(), b.qubits.begin(), b.qubits.end());
    sim::FiberAddSemantics sem;
    sem.target = out;
    sem.ctx = ctx;
    sem.delta_table.resize(1ULL << ctx.width());
    const std::uint64_t a_mask = (1ULL << a.width()) - 1;
    for (std::uint64_t cc = 0; cc < sem.delta_table.size(); ++cc) {
        sem.delta_table[cc] =
            truncated_product_code(cc & a_mask, a_fmt, cc >> a.width(), b_fmt, out_fmt);
    }
    block.semantics = std::move(sem);

    Circuit c;
    c.push(std::move(block));
    return c;
}

PwlProgram compile_pwl_program(const minimax::PwlSpec &spec) {
    PwlProgram program;
    for (std::size_t k = 1; k + 1 < spec.boundaries.size(); ++k) {
        const double b = spec.boundaries[k];
        const double rounded = std::round(b);
        if (std::abs(b - rounded) > 1e-6 || rounded < 0.0) {
            throw ConfigError("subdomain boundary " + std::to_string(b) +
                              " does not sit on the input code grid");
        }
        program.thresholds.push_back(static_cast<std::uint64_t>(rounded));
    }
    for (const auto &fit : spec.fits) {
        program.slope_codes.push_back(fixedpoint::encode(fit.slope, spec.coeff_fmt));
        program.intercept_codes.push_back(fixedpoint::encode(fit.intercept, spec.coeff_fmt));
    }
    return program;
}

std::uint64_t label_of(std::uint64_t x_code, std::span<const std::uint64_t> thresholds) {
    std::uint64_t k = 0;
    for (auto t : thresholds) {
        if (x_code >= t) {
            ++k;
        }
    }
    return k;
}

Circuit build_label_block(const Register &x, const Register &label,
                          std::span<const std::uint64_t> thresholds, const Register &scratch) {
    Circuit c;
    if (label.empty()) {
        if (!thresholds.empty()) {
            throw ConfigError("thresholds given but no label register");
        }
        return c;
    }
    const std::uint64_t x_codes = 1ULL << x.width();
    if (thresholds.size() != (1ULL << label.width()) - 1) {
        throw ConfigError("threshold count must be 2^n_l - 1");
    }
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] < 1 || thresholds[i] >= x_codes) {
            throw ConfigError("threshold outside the input code grid");
        }
        if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
            throw ConfigError("thresholds must be strictly ascending");
        }
    }
    const int ws = x.width() + 1;
    if (scratch.width() < ws) {
        throw ConfigError("comparator scratch needs input width + 1 bits");
    }
    const Register s = scratch_slice(scratch, ws);
    check_disjoint({&x, &label, &s}, "label gate");
    const std::uint32_t sign_bit = s.qubits[static_cast<std::size_t>(ws - 1)];

    sim::Block block;
    block.tag = "label";
    Circuit gates;
    gates.append(build_qft(label));
    gates.append(build_qft(s));
    gates.append(build_fourier_reg(x, s));
    for (auto t : thresholds) {
        gates.append(build_fourier_const(s, t, true));
        gates.append(build_qft(s, true));
        gates.push(sim::Gate::x(sign_bit));
        const std::uint32_t ctrl[] = {sign_bit};
        gates.append(build_fourier_const(label, 1, false, ctrl));
        gates.push(sim::Gate::x(sign_bit));
        gates.append(build_qft(s));
        gates.append(build_fourier_const(s, t, false));
    }
    gates.append(build_fourier_reg(x, s, true));
    gates.append(build_qft(s, true));
    gates.append(build_qft(label, true));
    for (const auto &op : gates.ops()) {
        block.gates.push_back(std::get<sim::Gate>(op));
    }

    sim::FiberAddSemantics sem;
    sem.target = label;
    sem.ctx = x;
    sem.delta_table.resize(x_codes);
    for (std::uint64_t cc = 0; cc < x_codes; ++cc) {
        sem.delta_table[cc] = label_of(cc, thresholds);
    }
    block.semantics = std::move(sem);

    c.push(std::move(block));
    return c;
}

Circuit build_load_block(const Register &label, const Register &coeff,
                         std::span<const std::uint64_t> codes) {
    if (codes.size() != (1ULL << label.width())) {
        throw ConfigError("coefficient table length does not equal 2^n_l");
    }
    check_disjoint({&label, &coeff}, "coefficient load");
    for (auto code : codes) {
        if (code >> coeff.width()) {
            throw ConfigError("coefficient code wider than the coefficient register");
        }
    }

    sim::Block block;
    block.tag = "load";
    for (std::uint64_t v = 0; v < codes.size(); ++v) {
        if (codes[v] == 0) {
            continue;
        }
        std::vector<std::uint32_t> flips;
        for (int b = 0; b < label.width(); ++b) {
            if (!((v >> b) & 1ULL)) {
                flips.push_back(label.qubits[b]);
            }
        }
        for (auto q : flips) {
            block.gates.push_back(sim::Gate::x(q));
        }
        for (int cbit = 0; cbit < coeff.width(); ++cbit) {
            if ((codes[v] >> cbit) & 1ULL) {
                block.gates.push_back(sim::Gate::x(coeff.qubits[cbit], label.qubits));
            }
        }
        for (auto q : flips) {
            block.gates.push_back(sim::Gate::x(q));
        }
    }

    sim::XorSemantics sem;
    sem.src = label;
    sem.dst = coeff;
    sem.xor_table.assign(codes.begin(), codes.end());
    block.semantics = std::move(sem);

    Circuit c;
    c.push(std::move(block));
    return c;
}

Circuit build_pwl(const PwlOracleLayout &layout, const PwlProgram &program, bool inverse) {
    layout.validate();
    program.validate(layout);

    Circuit c;
    const Circuit label_block =
        build_label_block(layout.x, layout.label, program.thresholds, layout.coeff);
    c.append(label_block);
    c.append(build_load_block(layout.label, layout.coeff, program.slope_codes));
    c.append(build_mult_block(layout.x, layout.x_fmt, layout.coeff, layout.coeff_fmt, layout.out,
                              layout.out_fmt));
    c.append(build_load_block(layout.label, layout.coeff, program.slope_codes));
    c.append(build_load_block(layout.label, layout.coeff, program.intercept_codes));
    c.append(build_add_block(layout.coeff, layout.coeff_fmt, layout.out, layout.out_fmt));
    c.append(build_load_block(layout.label, layout.coeff, program.intercept_codes));
    c.append(label_block.inverted());
    return inverse ? c.inverted() : c;
}

// ---- spec operations -------------------------------------------------------

void qft(Statevector &sv, const Register &reg, bool inverse) {
    run(sv, build_qft(reg, inverse));
}

void fourier_add(Statevector &sv, std::uint64_t addend, const Register &target,
                 std::span<const std::uint32_t> controls, bool subtract) {
    if (target.empty()) {
        throw CircuitError("fourier add on an empty register");
    }
    run(sv, build_fourier_const(target, addend, subtract, controls));
}

void fourier_add(Statevector &sv, const Register &src, const Register &target,
                 std::span<const std::uint32_t> controls, bool subtract) {
    if (target.empty()) {
        throw CircuitError("fourier add on an empty register");
    }
    run(sv, build_fourier_reg(src, target, subtract, controls));
}

void qft_multiply(Statevector &sv, const Register &a, const FixedPointFormat &a_fmt,
                  const Register &b, const FixedPointFormat &b_fmt, const Register &out,
                  const FixedPointFormat &out_fmt) {
    if (sv.residual_mass_outside_zero({out}) > 1e-12) {
        throw CircuitError("product register is not cleared");
    }
    run(sv, build_mult_block(a, a_fmt, b, b_fmt, out, out_fmt));
}

void label(Statevector &sv, const Register &x, const Register &label_reg,
           std::span<const std::uint64_t> thresholds, const Register &scratch) {
    run(sv, build_label_block(x, label_reg, thresholds, scratch));
}

void load_constants(Statevector &sv, const Register &label_reg, const Register &coeff,
                    std::span<const std::uint64_t> codes, bool uncompute) {
    Circuit c = build_load_block(label_reg, coeff, codes);
    run(sv, uncompute ? c.inverted() : c);
}

void pwl_apply(Statevector &sv, const PwlOracleLayout &layout, const PwlProgram &program,
               bool inverse) {
    run(sv, build_pwl(layout, program, inverse));
}

} // namespace qgw::qarith
