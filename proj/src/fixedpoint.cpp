#include "qgw/fixedpoint.hpp"

#include "qgw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qgw::fixedpoint {

namespace {

std::uint64_t code_mask(int n_bits) {
    return n_bits >= 64 ? ~0ULL : ((1ULL << n_bits) - 1);
}

std::string interval_string(const FixedPointFormat &fmt) {
    std::ostringstream os;
    os << "[" << fmt.min_value() << ", " << fmt.max_value() << "]";
    return os.str();
}

} // namespace

void FixedPointFormat::validate() const {
    const int min_bits = is_signed() ? 2 : 1;
    if (n_bits < min_bits || n_bits > 63) {
        throw ConfigError("fixed-point width " + std::to_string(n_bits) +
                          " invalid for representation (need " + std::to_string(min_bits) +
                          "..63 bits)");
    }
}

double FixedPointFormat::ulp() const { return std::ldexp(1.0, -p); }

double FixedPointFormat::min_value() const {
    switch (representation) {
    case Representation::unsigned_magnitude:
        return 0.0;
    case Representation::signed_magnitude:
        return -static_cast<double>(code_mask(n_bits - 1)) * ulp();
    case Representation::twos_complement:
        return -std::ldexp(1.0, n_bits - 1 - p);
    }
    return 0.0;
}

double FixedPointFormat::max_value() const {
    const int mag_bits = is_signed() ? n_bits - 1 : n_bits;
    return static_cast<double>(code_mask(mag_bits)) * ulp();
}

FixedPointFormat make_unsigned(int n_bits, int p) {
    FixedPointFormat fmt{Representation::unsigned_magnitude, n_bits, p};
    fmt.validate();
    return fmt;
}

FixedPointFormat make_signed_magnitude(int n_bits, int p) {
    FixedPointFormat fmt{Representation::signed_magnitude, n_bits, p};
    fmt.validate();
    return fmt;
}

FixedPointFormat make_twos_complement(int n_bits, int p) {
    FixedPointFormat fmt{Representation::twos_complement, n_bits, p};
    fmt.validate();
    return fmt;
}

std::uint64_t encode(double x, const FixedPointFormat &fmt) {
    fmt.validate();
    if (!std::isfinite(x)) {
        throw RangeError("cannot encode non-finite value");
    }
    // Round in units of the step; std::round breaks ties away from zero.
    const double scaled = std::round(std::ldexp(x, fmt.p));

    switch (fmt.representation) {
    case Representation::unsigned_magnitude: {
        const double max_code = static_cast<double>(code_mask(fmt.n_bits));
        if (scaled < 0.0 || scaled > max_code) {
            throw RangeError("value " + std::to_string(x) + " outside representable interval " +
                             interval_string(fmt));
        }
        return static_cast<std::uint64_t>(scaled);
    }
    case Representation::signed_magnitude: {
        const double max_code = static_cast<double>(code_mask(fmt.n_bits - 1));
        const double mag = std::abs(scaled);
        if (mag > max_code) {
            throw RangeError("value " + std::to_string(x) + " outside representable interval " +
                             interval_string(fmt));
        }
        const bool negative = std::signbit(scaled) && mag > 0.0;
        return (negative ? (1ULL << (fmt.n_bits - 1)) : 0ULL) | static_cast<std::uint64_t>(mag);
    }
    case Representation::twos_complement: {
        const double lo = -std::ldexp(1.0, fmt.n_bits - 1);
        const double hi = static_cast<double>(code_mask(fmt.n_bits - 1));
        if (scaled < lo || scaled > hi) {
            throw RangeError("value " + std::to_string(x) + " outside representable interval " +
                             interval_string(fmt));
        }
        const auto signed_code = static_cast<std::int64_t>(scaled);
        return static_cast<std::uint64_t>(signed_code) & code_mask(fmt.n_bits);
    }
    }
    throw FormatError("unknown representation");
}

double decode(std::uint64_t code, const FixedPointFormat &fmt) {
    fmt.validate();
    if (code & ~code_mask(fmt.n_bits)) {
        throw FormatError("code has bits above position " + std::to_string(fmt.n_bits - 1));
    }
    switch (fmt.representation) {
    case Representation::unsigned_magnitude:
        return std::ldexp(static_cast<double>(code), -fmt.p);
    case Representation::signed_magnitude: {
        const std::uint64_t mag = code & code_mask(fmt.n_bits - 1);
        const double value = std::ldexp(static_cast<double>(mag), -fmt.p);
        return (code >> (fmt.n_bits - 1)) ? -value : value;
    }
    case Representation::twos_complement: {
        std::int64_t v = static_cast<std::int64_t>(code);
        if (code >> (fmt.n_bits - 1)) {
            v -= static_cast<std::int64_t>(1ULL << fmt.n_bits);
        }
        return std::ldexp(static_cast<double>(v), -fmt.p);
    }
    }
    throw FormatError("unknown representation");
}

double decode_bits(const std::string &bits, const FixedPointFormat &fmt) {
    if (static_cast<int>(bits.size()) != fmt.n_bits) {
        throw FormatError("bitstring length " + std::to_string(bits.size()) +
                          " does not match format width " + std::to_string(fmt.n_bits));
    }
    std::uint64_t code = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw FormatError("bitstring contains character '" + std::string(1, c) + "'");
        }
        code = (code << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return decode(code, fmt);
}

std::string format_bits(std::uint64_t code, const FixedPointFormat &fmt) {
    fmt.validate();
    std::string out(static_cast<std::size_t>(fmt.n_bits), '0');
    for (int i = 0; i < fmt.n_bits; ++i) {
        if ((code >> i) & 1ULL) {
            out[static_cast<std::size_t>(fmt.n_bits - 1 - i)] = '1';
        }
    }
    return out;
}

std::string encode_bits(double x, const FixedPointFormat &fmt) {
    return format_bits(encode(x, fmt), fmt);
}

double quantize(double x, const FixedPointFormat &fmt) {
    fmt.validate();
    const double clamped = std::clamp(x, fmt.min_value(), fmt.max_value());
    return decode(encode(clamped, fmt), fmt);
}

} // namespace qgw::fixedpoint
