#pragma once

#include "qgw/grover_rudolph.hpp"
#include "qgw/minimax.hpp"
#include "qgw/qarith.hpp"
#include "qgw/statevector.hpp"

#include <functional>
#include <vector>

namespace qgw::phase_prep {

using fixedpoint::FixedPointFormat;
using grover_rudolph::OracleRegisters;
using sim::Register;
using sim::Statevector;

/// Phase values are handled in cycles (radians / 2pi) throughout.
using PhaseCycleFn = std::function<double(double)>;

struct PhaseConfig {
    FixedPointFormat ancilla_fmt; // stored-phase register, two's complement
    FixedPointFormat coeff_fmt;   // two's complement
    int n_l = 4;
    /// Wrap mode folds integer parts out of the fitted coefficients: the
    /// slope shifts by an integer per subdomain (exact for integer inputs)
    /// and the intercept by an integer, leaving every applied phase
    /// unchanged while keeping the register narrow. Off reproduces the
    /// unwrapped curve and overflows loudly instead.
    bool wrap = true;
    int grid_density = 512;

    void validate() const;
};

struct PhaseOracle {
    minimax::PwlSpec spec; // wrap-reduced coefficients in wrap mode
    qarith::PwlProgram program;
    double fit_err_inf; // against the (reduced) target, cycles
};

/// Fit bin index -> phase cycles over [0, 2^n) on uniform subdomains.
PhaseOracle fit_phase_cycles(const PhaseCycleFn &psi_cycles, int n, const PhaseConfig &config);

/// Store the fitted phase cycles of each basis state into the ancilla
/// register (inverse uncomputes).
void psi_prime_oracle(Statevector &sv, const Register &freq, const OracleRegisters &aux,
                      const PhaseOracle &oracle, const PhaseConfig &config, bool inverse = false);

/// One phase gate per precision qubit of the ancilla format; each branch
/// acquires exp(2 pi i frac(stored value)).
void precision_rotations(Statevector &sv, const Register &ancilla, const FixedPointFormat &fmt);

struct PhaseReport {
    double max_delta_psi = 0.0; // cycles, circle distance to the target
    std::vector<double> stored_cycles;
    std::uint64_t cnots_forward_oracle = 0;
    double fit_err_inf = 0.0;
};

/// Full phase loading: oracle forward, precision-qubit rotation ladder,
/// oracle inverse. Diagnostics read the stored codes between the oracle and
/// the ladder.
PhaseReport phase_prepare(Statevector &sv, const Register &freq, const OracleRegisters &aux,
                          const PhaseCycleFn &psi_cycles, const PhaseConfig &config,
                          bool collect_diagnostics = true);

/// Circle distance |a - b mod 1| mapped to [0, 1/2].
double cycle_distance(double a, double b);

} // namespace qgw::phase_prep
