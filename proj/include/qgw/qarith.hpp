#pragma once

#include "qgw/circuit.hpp"
#include "qgw/fixedpoint.hpp"
#include "qgw/minimax.hpp"
#include "qgw/statevector.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qgw::qarith {

using fixedpoint::FixedPointFormat;
using sim::Circuit;
using sim::Register;
using sim::Statevector;

/// Register roles of the piecewise-linear function oracle. The input is
/// unsigned, the product and coefficients two's complement. The low
/// x.width()+1 bits of the coefficient register double as the comparator
/// scratch of the label gate, so n_c must be at least x.width()+1 whenever
/// there is more than one subdomain.
struct PwlOracleLayout {
    Register x;
    FixedPointFormat x_fmt;
    Register out;
    FixedPointFormat out_fmt;
    Register coeff;
    FixedPointFormat coeff_fmt;
    Register label;

    void validate() const;
};

/// Quantized oracle program on the code grid: subdomain thresholds as input
/// codes plus slope/intercept coefficient codes per subdomain.
struct PwlProgram {
    std::vector<std::uint64_t> thresholds;
    std::vector<std::uint64_t> slope_codes;
    std::vector<std::uint64_t> intercept_codes;

    int n_l() const;
    void validate(const PwlOracleLayout &layout) const;
};

// ---- circuit builders ------------------------------------------------------

/// Standard QFT (DFT matrix convention, including the terminal swaps).
Circuit build_qft(const Register &reg, bool inverse = false);

/// Fourier-basis rotations adding `addend` register codes (mod 2^width) onto
/// `target`, which must already be in the Fourier basis.
Circuit build_fourier_const(const Register &target, std::uint64_t addend, bool subtract = false,
                            std::span<const std::uint32_t> controls = {});
/// Same for a source register holding an unsigned code; target += src.
Circuit build_fourier_reg(const Register &src, const Register &target, bool subtract = false,
                          std::span<const std::uint32_t> controls = {});

/// Self-contained adder block (QFT, rotations, inverse QFT) adding the
/// fixed-point value of src onto out at out's format, bits below out's
/// precision dropped. Fused form is an exact basis shift.
Circuit build_add_block(const Register &src, const FixedPointFormat &src_fmt, const Register &out,
                        const FixedPointFormat &out_fmt);

/// Multiplier block: out += a * b truncated to out's format, a unsigned,
/// b two's complement; the sign bit of b contributes its negative weight, so
/// no separate correction pass is needed.
Circuit build_mult_block(const Register &a, const FixedPointFormat &a_fmt, const Register &b,
                         const FixedPointFormat &b_fmt, const Register &out,
                         const FixedPointFormat &out_fmt);

/// Label gate: Fourier-space subtract-threshold sign tests against the
/// scratch register; label += subdomain index of x. Scratch must be cleared.
Circuit build_label_block(const Register &x, const Register &label,
                          std::span<const std::uint64_t> thresholds, const Register &scratch);

/// Coefficient loader: label-pattern-controlled X gates; self-inverse.
Circuit build_load_block(const Register &label, const Register &coeff,
                         std::span<const std::uint64_t> codes);

/// Full oracle: label, load slope, multiply, unload, load intercept, add,
/// unload, unlabel. Forward expects out/coeff/label cleared.
Circuit build_pwl(const PwlOracleLayout &layout, const PwlProgram &program, bool inverse = false);

/// Quantize a fitted spec onto the code grid: boundaries become integer input
/// codes (they must already sit on the grid to within 1e-6) and coefficients
/// become exact codes of the spec's coefficient format.
PwlProgram compile_pwl_program(const minimax::PwlSpec &spec);

// ---- classical reference of the quantum arithmetic -------------------------

/// Retained-term product: sum of a_i * b_k * 2^(i+k-pa-pb+po) over pairs with
/// nonnegative exponent, the multiplier sign bit entering negatively, mod
/// 2^out_bits. Exactly the shift set realized by the multiplier block.
std::uint64_t truncated_product_code(std::uint64_t a_code, const FixedPointFormat &a_fmt,
                                     std::uint64_t b_code, const FixedPointFormat &b_fmt,
                                     const FixedPointFormat &out_fmt);

/// Same retained-term rule for the adder block (register-to-register).
std::uint64_t truncated_addend_code(std::uint64_t src_code, const FixedPointFormat &src_fmt,
                                    const FixedPointFormat &out_fmt);

/// Subdomain index of x under half-open intervals (last closed above).
std::uint64_t label_of(std::uint64_t x_code, std::span<const std::uint64_t> thresholds);

// ---- spec operations -------------------------------------------------------

void qft(Statevector &sv, const Register &reg, bool inverse = false);

void fourier_add(Statevector &sv, std::uint64_t addend, const Register &target,
                 std::span<const std::uint32_t> controls = {}, bool subtract = false);
void fourier_add(Statevector &sv, const Register &src, const Register &target,
                 std::span<const std::uint32_t> controls = {}, bool subtract = false);

/// Checks that out is cleared (precondition error otherwise), then applies
/// the multiplier block.
void qft_multiply(Statevector &sv, const Register &a, const FixedPointFormat &a_fmt,
                  const Register &b, const FixedPointFormat &b_fmt, const Register &out,
                  const FixedPointFormat &out_fmt);

void label(Statevector &sv, const Register &x, const Register &label_reg,
           std::span<const std::uint64_t> thresholds, const Register &scratch);

void load_constants(Statevector &sv, const Register &label_reg, const Register &coeff,
                    std::span<const std::uint64_t> codes, bool uncompute = false);

void pwl_apply(Statevector &sv, const PwlOracleLayout &layout, const PwlProgram &program,
               bool inverse = false);

} // namespace qgw::qarith
