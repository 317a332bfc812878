#include "qgw/gatecost.hpp"

#include "qgw/errors.hpp"

#include <cmath>
#include <fstream>

namespace qgw::gatecost {

std::string to_string(AncillaPolicy policy) {
    switch (policy) {
    case AncillaPolicy::none:
        return "none";
    case AncillaPolicy::n_minus_2:
        return "n_minus_2";
    case AncillaPolicy::n_minus_1:
        return "n_minus_1";
    }
    return "?";
}

AncillaPolicy ancilla_policy_from_string(const std::string &name) {
    if (name == "none") {
        return AncillaPolicy::none;
    }
    if (name == "n_minus_2") {
        return AncillaPolicy::n_minus_2;
    }
    if (name == "n_minus_1") {
        return AncillaPolicy::n_minus_1;
    }
    throw ConfigError("unknown ancilla policy '" + name + "'");
}

std::uint64_t cnx_cost(int n_controls, AncillaPolicy policy) {
    if (n_controls < 0) {
        throw ConfigError("negative control count");
    }
    if (n_controls == 0) {
        return 0;
    }
    if (n_controls == 1) {
        return 1;
    }
    const auto k = static_cast<std::uint64_t>(n_controls);
    switch (policy) {
    case AncillaPolicy::none:
        return 2 * k * k - 6 * k + 5;
    case AncillaPolicy::n_minus_2:
        return 20 * (k - 2);
    case AncillaPolicy::n_minus_1:
        return 12 * (k - 1) + 1;
    }
    return 0;
}

std::uint64_t c_mult(int n1, int n2) {
    const auto a = static_cast<std::uint64_t>(n1);
    const auto b = static_cast<std::uint64_t>(n2);
    return 8 * (a + b) * b * (a - 1) + 20 * (a + b) * (a + b) - 13 * (a + b);
}

std::uint64_t c_add(int n1, int n2) {
    const auto a = static_cast<std::uint64_t>(n1);
    const auto b = static_cast<std::uint64_t>(n2);
    return 2 * a * b + 2 * b * (b - 1);
}

std::uint64_t c_label(int n, int n_l, AncillaPolicy) {
    const auto nn = static_cast<std::uint64_t>(n);
    const auto l = static_cast<std::uint64_t>(n_l);
    return 2 * l * (l - 1) + (1ULL << (l + 1)) * (6 * nn + l + 1);
}

std::uint64_t c_x(int n_c, int n_l, AncillaPolicy policy) {
    if (n_l == 0) {
        return 0;
    }
    return static_cast<std::uint64_t>(n_c) * (1ULL << n_l) * cnx_cost(n_l, policy);
}

PrimitiveCosts primitive_costs(int n1, int n2, int n, int n_l, int n_c, AncillaPolicy policy) {
    if (n1 <= 0 || n2 <= 0 || n <= 0 || n_l < 0 || n_c <= 0) {
        throw ConfigError("primitive cost arguments must be positive");
    }
    return PrimitiveCosts{
        c_mult(n1, n2), c_add(n1, n2), c_label(n, n_l, policy), c_x(n_c, n_l, policy),
        cnx_cost(n_l, policy),
    };
}

std::uint64_t c_lpf(int n, int n_c, int n_l, AncillaPolicy policy) {
    return c_mult(n_c, n) + c_add(n_c, n_c + n) + c_label(n, n_l, policy) +
           3 * c_x(n_c, n_l, policy);
}

std::uint64_t c_gw(int n, int n_c, int n_l, GwVariant variant, AncillaPolicy policy) {
    const auto nn = static_cast<std::uint64_t>(n);
    if (variant.kind == GwVariant::Kind::pqc) {
        return 2 * c_lpf(n, n_c, n_l, policy) +
               static_cast<std::uint64_t>(variant.layers) * (nn - 1);
    }
    std::uint64_t total = 0;
    for (int m = 1; m <= n; ++m) {
        total += c_lpf(m, n_c, n_l, policy);
    }
    return 2 * total + 2 * (nn + static_cast<std::uint64_t>(n_c) * (nn - 1));
}

std::vector<RatioRow> ratio_curve(const std::vector<double> &durations_s,
                                  const RatioCurveConfig &config) {
    for (std::size_t i = 0; i < durations_s.size(); ++i) {
        if (durations_s[i] <= 0.0) {
            throw ConfigError("durations must be positive");
        }
        if (i > 0 && durations_s[i] < durations_s[i - 1]) {
            throw ConfigError("durations must be ascending");
        }
    }
    std::vector<RatioRow> rows;
    rows.reserve(durations_s.size());
    for (double T : durations_s) {
        const double bins = (config.f_max - config.f_min) * T;
        const int n = std::max(1, static_cast<int>(std::ceil(std::log2(std::max(bins, 2.0)))));
        if (n > 62) {
            throw ConfigError("duration maps to more than 62 qubits");
        }
        const std::uint64_t arbitrary = 1ULL << n;
        const std::uint64_t gr =
            c_gw(n, config.n_c, config.n_l, GwVariant::grover_rudolph(), config.policy);
        const std::uint64_t pqc =
            c_gw(n, config.n_c, config.n_l, GwVariant::pqc(config.pqc_layers), config.policy);
        rows.push_back(RatioRow{T, n, arbitrary, gr, pqc,
                                static_cast<double>(arbitrary) / static_cast<double>(gr),
                                static_cast<double>(arbitrary) / static_cast<double>(pqc)});
    }
    return rows;
}

void write_ratio_csv(const std::vector<RatioRow> &rows, const RatioCurveConfig &config,
                     const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << "# band_f_min_hz=" << config.f_min << " band_f_max_hz=" << config.f_max
        << " n_c=" << config.n_c << " n_l=" << config.n_l << " pqc_layers=" << config.pqc_layers
        << " policy=" << to_string(config.policy) << "\n";
    out << "T_seconds,n,cnots_arbitrary,cnots_gr,cnots_pqc,ratio_gr,ratio_pqc\n";
    char buf[160];
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%llu,%llu,%llu,%.17g,%.17g", r.duration_s, r.n,
                      static_cast<unsigned long long>(r.cnots_arbitrary),
                      static_cast<unsigned long long>(r.cnots_gr),
                      static_cast<unsigned long long>(r.cnots_pqc), r.ratio_gr, r.ratio_pqc);
        out << buf << '\n';
    }
}

} // namespace qgw::gatecost
