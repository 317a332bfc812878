#pragma once

#include "qgw/statevector.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace qgw::sim {

/// One primitive gate. Swap uses target/target2; rotations carry angle.
struct Gate {
    GateKind kind = GateKind::X;
    std::uint32_t target = 0;
    std::uint32_t target2 = 0;
    double angle = 0.0;
    std::vector<std::uint32_t> controls;

    static Gate x(std::uint32_t t, std::vector<std::uint32_t> cs = {});
    static Gate h(std::uint32_t t);
    static Gate ry(double theta, std::uint32_t t, std::vector<std::uint32_t> cs = {});
    static Gate rz(double theta, std::uint32_t t, std::vector<std::uint32_t> cs = {});
    static Gate phase(double theta, std::uint32_t t, std::vector<std::uint32_t> cs = {});
    static Gate swap(std::uint32_t a, std::uint32_t b);

    Gate inverted() const;
};

/// amp *= table[code(reg)].
struct DiagSemantics {
    Register reg;
    std::vector<std::complex<double>> table;
};

/// Basis map i -> i XOR deposit_dst(xor_table[code(src)]).
struct XorSemantics {
    Register src;
    Register dst;
    std::vector<std::uint64_t> xor_table;
};

/// Basis map code(target) += delta_table[code(ctx)] (mod 2^width).
struct FiberAddSemantics {
    Register target;
    Register ctx;
    std::vector<std::uint64_t> delta_table;
};

using BlockSemantics = std::variant<std::monostate, DiagSemantics, XorSemantics, FiberAddSemantics>;

/// A structured gate sequence with an equivalent classical basis action.
/// The gate list is authoritative for tallies and for gate-mode execution;
/// the semantics let the executor apply the block in one amplitude sweep.
/// Equivalence may rely on the block's documented preconditions (cleared
/// scratch registers), which the enclosing oracle guarantees.
struct Block {
    std::string tag;
    std::vector<Gate> gates;
    BlockSemantics semantics;

    Block inverted() const;
};

using Op = std::variant<Gate, Block>;

class Circuit {
  public:
    void push(Gate gate) { ops_.emplace_back(std::move(gate)); }
    void push(Block block) { ops_.emplace_back(std::move(block)); }
    void append(const Circuit &other);
    Circuit inverted() const;

    const std::vector<Op> &ops() const { return ops_; }
    bool empty() const { return ops_.empty(); }
    /// Primitive gates including those inside blocks.
    std::uint64_t gate_count() const;

  private:
    std::vector<Op> ops_;
};

enum class ExecMode {
    gates,     // play every primitive gate
    fused,     // apply block semantics in bulk sweeps
    automatic, // fused above the size threshold
};

/// Applies one primitive gate (tally counted by the statevector).
void apply_gate(Statevector &sv, const Gate &gate);

/// Executes the circuit. In fused mode block tallies are still accumulated
/// from the gate lists, so both modes report identical counts.
void run(Statevector &sv, const Circuit &circuit, ExecMode mode = ExecMode::automatic);

} // namespace qgw::sim
