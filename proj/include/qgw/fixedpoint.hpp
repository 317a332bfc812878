#pragma once

#include <cstdint>
#include <string>

namespace qgw::fixedpoint {

/// Binary number representations used by the quantum arithmetic registers.
enum class Representation {
    unsigned_magnitude,
    signed_magnitude,
    twos_complement,
};

/// A fixed-point binary codec: `n_bits` total bits, step size 2^-p.
///
/// For signed representations the leading bit is the sign, leaving
/// n_bits - 1 - p integer bits; p may be negative or exceed n_bits,
/// which shifts the representable window rather than invalidating it.
struct FixedPointFormat {
    Representation representation = Representation::unsigned_magnitude;
    int n_bits = 1;
    int p = 0;

    bool is_signed() const { return representation != Representation::unsigned_magnitude; }
    int integer_bits() const { return n_bits - p - (is_signed() ? 1 : 0); }

    /// Step between adjacent representable values (2^-p).
    double ulp() const;
    double min_value() const;
    double max_value() const;

    /// Throws ConfigError if the width is invalid for the representation.
    void validate() const;

    bool operator==(const FixedPointFormat &) const = default;
};

FixedPointFormat make_unsigned(int n_bits, int p);
FixedPointFormat make_signed_magnitude(int n_bits, int p);
FixedPointFormat make_twos_complement(int n_bits, int p);

/// Bit pattern whose decode is the round-to-nearest (ties away from zero)
/// quantization of x. Throws RangeError naming the representable interval
/// when the quantized value falls outside it.
std::uint64_t encode(double x, const FixedPointFormat &fmt);

/// Exact real value of a code under fmt.
double decode(std::uint64_t code, const FixedPointFormat &fmt);

/// decode() on an MSB-first bitstring; throws FormatError on length mismatch
/// or characters other than 0/1.
double decode_bits(const std::string &bits, const FixedPointFormat &fmt);

/// MSB-first text form of a code, n_bits characters.
std::string format_bits(std::uint64_t code, const FixedPointFormat &fmt);

/// encode() convenience returning the MSB-first bitstring.
std::string encode_bits(double x, const FixedPointFormat &fmt);

/// decode(encode(clamp(x))): saturates instead of throwing; idempotent.
double quantize(double x, const FixedPointFormat &fmt);

} // namespace qgw::fixedpoint
