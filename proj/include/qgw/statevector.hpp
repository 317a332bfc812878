#pragma once

#include "qgw/gatecost.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qgw::sim {

enum class Precision { f64, f32 };

/// Ordered qubit list; qubits[0] is the least significant bit of the
/// register's code.
struct Register {
    std::vector<std::uint32_t> qubits;

    Register() = default;
    Register(std::initializer_list<std::uint32_t> qs) : qubits(qs) {}
    explicit Register(std::vector<std::uint32_t> qs) : qubits(std::move(qs)) {}

    /// Contiguous ascending run [start, start + width).
    static Register range(std::uint32_t start, int width);

    int width() const { return static_cast<int>(qubits.size()); }
    bool empty() const { return qubits.empty(); }
    std::uint64_t mask() const;
    bool is_ascending_run() const;

    /// Scatter a register code onto its qubit positions in a global index.
    std::uint64_t deposit(std::uint64_t code) const;
    /// Gather the register code out of a global index.
    std::uint64_t extract(std::uint64_t index) const;
};

/// Named disjoint registers over the qubits of one state.
class RegisterMap {
  public:
    void add(const std::string &name, Register reg);
    const Register &at(const std::string &name) const;
    bool contains(const std::string &name) const;
    /// Throws CircuitError if registers overlap or exceed n_qubits.
    void validate(int n_qubits) const;
    const std::map<std::string, Register> &all() const { return registers_; }

  private:
    std::map<std::string, Register> registers_;
};

enum class GateKind { X, H, Ry, Rz, Phase, Swap };

std::string to_string(GateKind kind);

/// CNOT-equivalent accounting after notional decomposition of controlled
/// gates. cnot_count is nondecreasing over a circuit's execution.
class GateTally {
  public:
    explicit GateTally(gatecost::AncillaPolicy policy = gatecost::AncillaPolicy::none)
        : policy_(policy) {}

    void count(GateKind kind, int n_controls);
    void reset();

    std::uint64_t cnot_count() const { return cnot_count_; }
    gatecost::AncillaPolicy policy() const { return policy_; }
    void set_policy(gatecost::AncillaPolicy policy) { policy_ = policy; }
    /// Keys like "X", "CX", "CCP"; control counts above two collapse onto
    /// the deepest bucket's exact prefix.
    std::map<std::string, std::uint64_t> primitive_counts() const;

  private:
    static constexpr int kKinds = 6;
    static constexpr int kControlBuckets = 8;
    gatecost::AncillaPolicy policy_;
    std::uint64_t cnot_count_ = 0;
    std::array<std::array<std::uint64_t, kControlBuckets>, kKinds> counts_{};
};

/// Dense statevector over n qubits with qubit 0 least significant in the
/// basis index. Owns a CNOT tally; mutation requires exclusive access.
class Statevector {
  public:
    static Statevector init(int n_qubits, Precision precision = Precision::f64);

    /// Memory cap consulted by init(); estimate above it raises CapacityError.
    static void set_memory_cap_bytes(std::uint64_t bytes);
    static std::uint64_t memory_cap_bytes();

    int n_qubits() const { return n_qubits_; }
    Precision precision() const { return precision_; }
    std::uint64_t dimension() const { return 1ULL << n_qubits_; }

    std::complex<double> amplitude(std::uint64_t index) const;
    void set_amplitude(std::uint64_t index, std::complex<double> value);
    double norm_sq() const;
    double probability_of(const Register &reg, std::uint64_t code) const;

    GateTally &tally() { return tally_; }
    const GateTally &tally() const { return tally_; }

    // -- primitive gates ---------------------------------------------------
    void apply_x(std::uint32_t target, std::span<const std::uint32_t> controls = {});
    void apply_h(std::uint32_t target, std::span<const std::uint32_t> controls = {});
    void apply_ry(double theta, std::uint32_t target, std::span<const std::uint32_t> controls = {});
    void apply_rz(double theta, std::uint32_t target, std::span<const std::uint32_t> controls = {});
    void apply_phase(double theta, std::uint32_t target,
                     std::span<const std::uint32_t> controls = {});
    void apply_swap(std::uint32_t a, std::uint32_t b);

    // -- bulk kernels (no tally side effects; the circuit layer accounts) --
    /// amp[i] *= phase_table[reg code of i]; table length 2^reg.width().
    void bulk_phase_by_code(const Register &reg, const std::vector<std::complex<double>> &table);
    /// Basis permutation i -> i XOR deposit(xor_code(src code)); the xor mask
    /// must land on bits disjoint from src.
    void bulk_xor_by_code(const Register &src, const Register &dst,
                          const std::function<std::uint64_t(std::uint64_t)> &xor_code);
    /// In-place cyclic add on the target register fiber:
    /// new_code = code + delta(ctx code) mod 2^width.
    void bulk_fiber_add(const Register &target, const Register &ctx,
                        const std::function<std::uint64_t(std::uint64_t)> &delta);

    // -- measurement and comparison ----------------------------------------
    std::vector<double> marginal_probs(const Register &reg) const;
    /// Multinomial histogram over MSB-first basis labels of reg; simulator
    /// level sampling, the state is not collapsed. Deterministic per seed.
    std::map<std::string, std::uint64_t> measure_counts(const Register &reg, std::uint64_t shots,
                                                        std::uint64_t seed) const;

    /// Amplitudes over reg's codes on the slice where all other qubits are 0.
    std::vector<std::complex<double>> extract_register_state(const Register &reg) const;
    /// Probability mass outside the all-zeros slice of the given registers.
    double residual_mass_outside_zero(const std::vector<Register> &regs) const;

    /// Place `small` on `where` (other qubits |0>); overwrites this state.
    void embed(const Statevector &small, const Register &where);

    /// CSV dump: index,bitstring,re,im (bitstring MSB-first over all qubits).
    void dump_csv(const std::string &path) const;

  private:
    Statevector() = default;

    template <typename Visitor> void visit(Visitor &&v);
    template <typename Visitor> void visit(Visitor &&v) const;

    int n_qubits_ = 0;
    Precision precision_ = Precision::f64;
    GateTally tally_;
    std::variant<std::vector<std::complex<double>>, std::vector<std::complex<float>>> data_;
};

/// |<a|b>|^2; throws ConfigError on dimension mismatch.
double fidelity(const Statevector &a, const Statevector &b);
double fidelity(const Statevector &a, const std::vector<std::complex<double>> &target);
double fidelity(const std::vector<std::complex<double>> &a,
                const std::vector<std::complex<double>> &b);
/// 1 - sqrt(fidelity).
double mismatch_from_fidelity(double fidelity_value);

} // namespace qgw::sim
