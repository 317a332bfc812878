#pragma once

#include "qgw/minimax.hpp"
#include "qgw/qarith.hpp"
#include "qgw/statevector.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qgw::grover_rudolph {

using fixedpoint::FixedPointFormat;
using sim::Register;
using sim::Statevector;

/// Conditional split angles at one refinement level: arccos of the square
/// root of the left-half probability fraction of each of the 2^level bins,
/// summed from the fine-grid masses. Bins with no mass get pi/4 so the
/// rotation stays defined on unreachable branches.
std::vector<double> split_angle_table(std::span<const double> p_mass, int level);

/// Multiplexed Ry loading sqrt of the coarse-grained masses onto the first
/// m_a qubits with exact classical angles; 2^m CNOTs per level.
void small_m_prepare(Statevector &sv, const Register &freq, std::span<const double> p_mass,
                     int m_a);

/// Ancilla registers shared by all oracle-driven levels.
struct OracleRegisters {
    Register label;
    Register coeff;
    Register out;
};

struct GRConfig {
    int m_a = 5;                // levels below: exact-angle rotation tree
    int m_b = 6;                // levels at and above: Hadamards
    int n_l = 4;                // subdomain bits (capped at the level)
    FixedPointFormat coeff_fmt; // two's complement
    FixedPointFormat angle_fmt; // output register format, two's complement
    int grid_density = 512;

    void validate(int n) const;
};

/// Minimax fit of bin index -> split angle at one level, on uniform
/// subdomains of the level's code grid (linear interpolation between the
/// integer samples defines the fitted function).
minimax::PwlSpec fit_split_angles(std::span<const double> p_mass, int level, int n_l,
                                  const FixedPointFormat &coeff_fmt, int grid_density = 512);

/// One oracle-driven level: computes the fitted split angle of the loaded
/// prefix into the angle register, rotates qubit `level` by twice the stored
/// angle through bitwise-controlled Ry gates, and uncomputes.
void gr_step(Statevector &sv, const Register &freq, const OracleRegisters &aux,
             const minimax::PwlSpec &spec, int level, const GRConfig &config);

struct LevelReport {
    int level;
    double fit_err_inf; // 0 for exact-angle and Hadamard levels
    std::uint64_t cnots;
};

/// Full amplitude loading: exact-angle tree below m_a, oracle levels in
/// [m_a, m_b), Hadamards from m_b up.
std::vector<LevelReport> gr_prepare(Statevector &sv, const Register &freq,
                                    const OracleRegisters &aux, std::span<const double> p_mass,
                                    const GRConfig &config);

} // namespace qgw::grover_rudolph
