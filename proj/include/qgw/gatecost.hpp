#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qgw::gatecost {

/// Decomposition policy for multi-controlled X gates; selects which
/// closed-form CNOT bound is charged per C^k X.
enum class AncillaPolicy {
    none,
    n_minus_2,
    n_minus_1,
};

std::string to_string(AncillaPolicy policy);
AncillaPolicy ancilla_policy_from_string(const std::string &name);

/// CNOT-equivalents of an X gate with n_controls controls under the policy.
/// n_controls 0 and 1 cost 0 and 1; k >= 2 uses the policy's closed form.
std::uint64_t cnx_cost(int n_controls, AncillaPolicy policy);

/// Closed-form upper bounds for the arithmetic primitives.
std::uint64_t c_mult(int n1, int n2);
std::uint64_t c_add(int n1, int n2);
std::uint64_t c_label(int n, int n_l, AncillaPolicy policy = AncillaPolicy::none);
std::uint64_t c_x(int n_c, int n_l, AncillaPolicy policy = AncillaPolicy::none);

struct PrimitiveCosts {
    std::uint64_t mult;
    std::uint64_t add;
    std::uint64_t label;
    std::uint64_t x_load;
    std::uint64_t cnx;
};

PrimitiveCosts primitive_costs(int n1, int n2, int n, int n_l, int n_c, AncillaPolicy policy);

/// Bound for one forward piecewise-linear function oracle.
std::uint64_t c_lpf(int n, int n_c, int n_l, AncillaPolicy policy = AncillaPolicy::none);

/// Preparation-method variant for the combined amplitude + phase bound.
struct GwVariant {
    enum class Kind { grover_rudolph, pqc } kind = Kind::grover_rudolph;
    int layers = 0; // pqc only

    static GwVariant grover_rudolph() { return {Kind::grover_rudolph, 0}; }
    static GwVariant pqc(int layers) { return {Kind::pqc, layers}; }
};

std::uint64_t c_gw(int n, int n_c, int n_l, GwVariant variant,
                   AncillaPolicy policy = AncillaPolicy::none);

struct RatioRow {
    double duration_s;
    int n;
    std::uint64_t cnots_arbitrary; // 2^n
    std::uint64_t cnots_gr;
    std::uint64_t cnots_pqc;
    double ratio_gr;
    double ratio_pqc;
};

struct RatioCurveConfig {
    double f_min = 1.0;
    double f_max = 2048.0;
    int n_c = 16;
    int n_l = 4;
    int pqc_layers = 100;
    AncillaPolicy policy = AncillaPolicy::none;
};

/// Duration-vs-cost study: for each duration T the band is discretised into
/// (f_max - f_min) * T bins, n = ceil(log2(bins)), and the ratio compares the
/// 2^n-CNOT arbitrary loader against the closed-form bounds.
std::vector<RatioRow> ratio_curve(const std::vector<double> &durations_s,
                                  const RatioCurveConfig &config);

void write_ratio_csv(const std::vector<RatioRow> &rows, const RatioCurveConfig &config,
                     const std::string &path);

} // namespace qgw::gatecost
