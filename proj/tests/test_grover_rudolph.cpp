#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgw/errors.hpp"
#include "qgw/gatecost.hpp"
#include "qgw/grover_rudolph.hpp"
#include "qgw/waveform.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qgw;
using namespace qgw::grover_rudolph;
using sim::Register;
using sim::Statevector;

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

std::vector<double> paper_masses(int n) {
    waveform::WaveformParams params;
    params.m1 = 35.0;
    params.m2 = 30.0;
    const auto grid = waveform::frequency_grid(40.0, 168.0, n);
    return waveform::target_masses(params, grid);
}

GRConfig small_config(int m_a, int m_b, int n_l, int n_c, int n_o) {
    GRConfig config;
    config.m_a = m_a;
    config.m_b = m_b;
    config.n_l = n_l;
    config.coeff_fmt = fixedpoint::make_twos_complement(n_c, n_c - 1);
    config.angle_fmt = fixedpoint::make_twos_complement(n_o, n_o - 1);
    return config;
}

struct Rig {
    Statevector sv;
    Register freq;
    OracleRegisters aux;
};

Rig make_rig(int n, int n_l, int n_c, int n_o) {
    const int total = n_o + n_l + n_c + n;
    Rig rig{Statevector::init(total),
            Register::range(static_cast<std::uint32_t>(n_o + n_l + n_c), n), OracleRegisters{}};
    rig.aux.out = Register::range(0, n_o);
    rig.aux.label = Register::range(static_cast<std::uint32_t>(n_o), n_l);
    rig.aux.coeff = Register::range(static_cast<std::uint32_t>(n_o + n_l), n_c);
    return rig;
}

std::vector<double> exact_amplitudes(std::span<const double> p_mass) {
    double total = 0.0;
    for (double p : p_mass) {
        total += p;
    }
    std::vector<double> amps(p_mass.size());
    for (std::size_t j = 0; j < amps.size(); ++j) {
        amps[j] = std::sqrt(p_mass[j] / total);
    }
    return amps;
}

} // namespace

TEST_CASE("split angles: uniform masses give pi/4 everywhere") {
    const std::vector<double> uniform(64, 1.0);
    for (int level : {0, 2, 5}) {
        for (double z : split_angle_table(uniform, level)) {
            CHECK(z == doctest::Approx(kQuarterPi).epsilon(1e-14));
        }
    }
}

TEST_CASE("split angles on the reference grid match the frozen integrals") {
    const auto masses = paper_masses(6);
    const auto z0 = split_angle_table(masses, 0);
    REQUIRE(z0.size() == 1);
    // Frozen from the squared-bin-integral computation.
    CHECK(std::cos(z0[0]) * std::cos(z0[0]) ==
          doctest::Approx(0.84497363396452100).epsilon(1e-11));
    CHECK(z0[0] == doctest::Approx(0.40469006252624930).epsilon(1e-9));
    // Independent route: continuous f^{-7/3} integral ratio agrees closely.
    CHECK(std::abs(std::cos(z0[0]) * std::cos(z0[0]) - 0.84498968023303729) < 5e-5);
}

TEST_CASE("split angles always land in the first quadrant") {
    const auto masses = paper_masses(6);
    for (int level = 0; level < 6; ++level) {
        for (double z : split_angle_table(masses, level)) {
            CHECK(z >= 0.0);
            CHECK(z <= std::numbers::pi / 2.0);
        }
    }
}

TEST_CASE("empty bins default to the balanced split") {
    std::vector<double> masses(8, 0.0);
    masses[0] = 1.0;
    const auto z = split_angle_table(masses, 2);
    CHECK(z[0] == doctest::Approx(0.0));        // all mass in the left half
    CHECK(z[1] == doctest::Approx(kQuarterPi)); // empty bin
    CHECK(z[3] == doctest::Approx(kQuarterPi));
    const std::vector<double> negative{1.0, -0.5};
    CHECK_THROWS_AS(split_angle_table(negative, 0), DomainError);
}

TEST_CASE("the angle limit approaches pi/4 monotonically on the smooth grid") {
    const auto masses = paper_masses(6);
    double prev = 10.0;
    for (int level = 0; level < 6; ++level) {
        double worst = 0.0;
        for (double z : split_angle_table(masses, level)) {
            worst = std::max(worst, std::abs(z - kQuarterPi));
        }
        CHECK(worst <= prev + 1e-12);
        prev = worst;
    }
}

TEST_CASE("exact-angle tree with uniform masses equals the Hadamard wall") {
    const int n = 4;
    auto sv = Statevector::init(n);
    const std::vector<double> uniform(1U << n, 0.0625);
    small_m_prepare(sv, Register::range(0, n), uniform, n);
    auto href = Statevector::init(n);
    for (int q = 0; q < n; ++q) {
        href.apply_h(static_cast<std::uint32_t>(q));
    }
    CHECK(testutil::max_amp_diff(sv, href) < 1e-10);
}

TEST_CASE("exact-angle tree loads coarse-grained roots exactly") {
    const auto masses = paper_masses(6);
    auto sv = Statevector::init(6);
    small_m_prepare(sv, Register::range(0, 6), masses, 2);
    // Two levels load the top two bits of the bin index.
    for (std::uint64_t j = 0; j < 4; ++j) {
        double sum = 0.0;
        for (std::uint64_t i = 0; i < 16; ++i) {
            sum += masses[j * 16 + i];
        }
        CHECK(std::abs(sv.amplitude(j << 4) - std::sqrt(sum)) < 1e-10);
    }
    CHECK(sv.tally().cnot_count() <= 4); // 2^{m_a}
}

TEST_CASE("exact-angle tree reproduces any distribution at full depth") {
    std::mt19937_64 rng(5);
    std::vector<double> masses(64);
    for (auto &m : masses) {
        m = 0.05 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    auto sv = Statevector::init(6);
    small_m_prepare(sv, Register::range(0, 6), masses, 6);
    const auto expect = exact_amplitudes(masses);
    for (std::uint64_t j = 0; j < 64; ++j) {
        CHECK(std::abs(sv.amplitude(j) - expect[j]) < 1e-10);
        CHECK(std::abs(sv.amplitude(j).imag()) < 1e-12);
    }
    CHECK(sv.tally().cnot_count() <= 64);
}

TEST_CASE("oracle step with uniform masses splits every branch evenly") {
    const int n = 4;
    const std::vector<double> uniform(1U << n, 1.0 / 16.0);
    auto rig = make_rig(n, 2, 6, 6);
    const auto config = small_config(3, 4, 2, 6, 6);
    small_m_prepare(rig.sv, rig.freq, uniform, 3);
    const auto spec = fit_split_angles(uniform, 3, 2, config.coeff_fmt);
    gr_step(rig.sv, rig.freq, rig.aux, spec, 3, config);
    for (std::uint64_t j = 0; j < 16; ++j) {
        CHECK(std::abs(std::abs(rig.sv.amplitude(rig.freq.deposit(j))) - 0.25) < 2e-3);
    }
    CHECK(rig.sv.residual_mass_outside_zero({rig.aux.out, rig.aux.label, rig.aux.coeff}) < 1e-10);
}

TEST_CASE("oracle step tracks the classical split within the angle step") {
    const auto masses = paper_masses(5);
    const int level = 4;
    auto rig = make_rig(5, 3, 8, 8);
    const auto config = small_config(level, 5, 3, 8, 8);
    small_m_prepare(rig.sv, rig.freq, masses, level);
    const auto spec = fit_split_angles(masses, level, 3, config.coeff_fmt);
    gr_step(rig.sv, rig.freq, rig.aux, spec, level, config);

    const auto expect = exact_amplitudes(masses);
    const double tol = std::ldexp(1.0, -config.angle_fmt.p) + spec.max_err_inf();
    for (std::uint64_t j = 0; j < 32; ++j) {
        const double got = std::abs(rig.sv.amplitude(rig.freq.deposit(j)));
        CHECK(std::abs(got - expect[j]) < tol);
    }
}

TEST_CASE("full preparation at a reduced scale reaches high fidelity") {
    const int n = 5;
    const auto masses = paper_masses(n);
    auto rig = make_rig(n, 3, 8, 8);
    const auto config = small_config(4, 5, 3, 8, 8);
    const auto reports = gr_prepare(rig.sv, rig.freq, rig.aux, masses, config);
    CHECK(!reports.empty());

    const auto expect = exact_amplitudes(masses);
    std::complex<double> inner = 0.0;
    for (std::uint64_t j = 0; j < (1ULL << n); ++j) {
        const auto amp = rig.sv.amplitude(rig.freq.deposit(j));
        CHECK(std::abs(amp.imag()) < 1e-10);
        inner += std::conj(amp) * expect[j];
    }
    CHECK(std::norm(inner) > 0.999);
    CHECK(rig.sv.residual_mass_outside_zero({rig.aux.out, rig.aux.label, rig.aux.coeff}) < 1e-9);

    CHECK(rig.sv.tally().cnot_count() <=
          gatecost::c_gw(n, 8, 3, gatecost::GwVariant::grover_rudolph()));
}

TEST_CASE("hadamard-only configuration is the uniform state") {
    const int n = 4;
    const std::vector<double> masses = paper_masses(n);
    auto sv = Statevector::init(n);
    GRConfig config = small_config(0, 0, 2, 6, 6);
    const auto reports = gr_prepare(sv, Register::range(0, n), OracleRegisters{}, masses, config);
    CHECK(reports.size() == static_cast<std::size_t>(n));
    for (std::uint64_t j = 0; j < (1ULL << n); ++j) {
        CHECK(std::abs(sv.amplitude(j) - 0.25) < 1e-12);
    }
}

TEST_CASE("hadamard tail matches the classical balanced-split substitution") {
    const int n = 4;
    const auto masses = paper_masses(n);

    auto full = Statevector::init(n);
    gr_prepare(full, Register::range(0, n), OracleRegisters{}, masses,
               small_config(n, n, 2, 8, 8));
    auto tail = Statevector::init(n);
    gr_prepare(tail, Register::range(0, n), OracleRegisters{}, masses,
               small_config(n - 1, n - 1, 2, 8, 8));

    const double f_sim = sim::fidelity(full, tail);

    // Classical substitution: the last level splits on the most significant
    // qubit; replace that split by equal halves.
    const auto exact = exact_amplitudes(masses);
    std::vector<double> substituted(exact.size());
    for (std::uint64_t parent = 0; parent < exact.size() / 2; ++parent) {
        const double lo = exact[2 * parent];
        const double hi = exact[2 * parent + 1];
        const double mass = lo * lo + hi * hi;
        substituted[2 * parent] = std::sqrt(mass / 2.0);
        substituted[2 * parent + 1] = std::sqrt(mass / 2.0);
    }
    double inner = 0.0;
    for (std::size_t j = 0; j < exact.size(); ++j) {
        inner += exact[j] * substituted[j];
    }
    const double f_classical = inner * inner;
    CHECK(std::abs(f_sim - f_classical) < 1e-9);
}

TEST_CASE("configuration validation") {
    GRConfig bad = small_config(3, 2, 2, 6, 6);
    CHECK_THROWS_AS(bad.validate(4), ConfigError);
    GRConfig wide = small_config(0, 5, 2, 6, 6);
    CHECK_THROWS_AS(wide.validate(4), ConfigError);
    auto sv = Statevector::init(4);
    const std::vector<double> masses(8, 0.125); // wrong length for n = 4
    CHECK_THROWS_AS(gr_prepare(sv, Register::range(0, 4), OracleRegisters{}, masses,
                               small_config(0, 0, 1, 4, 4)),
                    ConfigError);
}
