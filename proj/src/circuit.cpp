#include "qgw/circuit.hpp"

#include "qgw/errors.hpp"

#include <algorithm>

namespace qgw::sim {

namespace {
constexpr int kFusedQubitThreshold = 18;
}

Gate Gate::x(std::uint32_t t, std::vector<std::uint32_t> cs) {
    return Gate{GateKind::X, t, 0, 0.0, std::move(cs)};
}
Gate Gate::h(std::uint32_t t) { return Gate{GateKind::H, t, 0, 0.0, {}}; }
Gate Gate::ry(double theta, std::uint32_t t, std::vector<std::uint32_t> cs) {
    return Gate{GateKind::Ry, t, 0, theta, std::move(cs)};
}
Gate Gate::rz(double theta, std::uint32_t t, std::vector<std::uint32_t> cs) {
    return Gate{GateKind::Rz, t, 0, theta, std::move(cs)};
}
Gate Gate::phase(double theta, std::uint32_t t, std::vector<std::uint32_t> cs) {
    return Gate{GateKind::Phase, t, 0, theta, std::move(cs)};
}
Gate Gate::swap(std::uint32_t a, std::uint32_t b) { return Gate{GateKind::Swap, a, b, 0.0, {}}; }

Gate Gate::inverted() const {
    Gate g = *this;
    switch (kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::Swap:
        break;
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::Phase:
        g.angle = -g.angle;
        break;
    }
    return g;
}

Block Block::inverted() const {
    Block inv;
    inv.tag = tag + "^-1";
    inv.gates.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        inv.gates.push_back(it->inverted());
    }
    if (std::holds_alternative<DiagSemantics>(semantics)) {
        auto sem = std::get<DiagSemantics>(semantics);
        for (auto &v : sem.table) {
            v = std::conj(v);
        }
        inv.semantics = std::move(sem);
    } else if (std::holds_alternative<XorSemantics>(semantics)) {
        inv.semantics = std::get<XorSemantics>(semantics);
    } else if (std::holds_alternative<FiberAddSemantics>(semantics)) {
        auto sem = std::get<FiberAddSemantics>(semantics);
        const std::uint64_t mod = 1ULL << sem.target.width();
        for (auto &d : sem.delta_table) {
            d = (mod - (d & (mod - 1))) & (mod - 1);
        }
        inv.semantics = std::move(sem);
    }
    return inv;
}

void Circuit::append(const Circuit &other) {
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
}

Circuit Circuit::inverted() const {
    Circuit inv;
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        if (std::holds_alternative<Gate>(*it)) {
            inv.push(std::get<Gate>(*it).inverted());
        } else {
            inv.push(std::get<Block>(*it).inverted());
        }
    }
    return inv;
}

std::uint64_t Circuit::gate_count() const {
    std::uint64_t n = 0;
    for (const auto &op : ops_) {
        if (std::holds_alternative<Gate>(op)) {
            ++n;
        } else {
            n += std::get<Block>(op).gates.size();
        }
    }
    return n;
}

void apply_gate(Statevector &sv, const Gate &gate) {
    const std::span<const std::uint32_t> cs(gate.controls);
    switch (gate.kind) {
    case GateKind::X:
        sv.apply_x(gate.target, cs);
        return;
    case GateKind::H:
        if (!gate.controls.empty()) {
            throw CircuitError("controlled H is not part of the gate set");
        }
        sv.apply_h(gate.target);
        return;
    case GateKind::Ry:
        sv.apply_ry(gate.angle, gate.target, cs);
        return;
    case GateKind::Rz:
        sv.apply_rz(gate.angle, gate.target, cs);
        return;
    case GateKind::Phase:
        sv.apply_phase(gate.angle, gate.target, cs);
        return;
    case GateKind::Swap:
        if (!gate.controls.empty()) {
            throw CircuitError("controlled SWAP is not part of the gate set");
        }
        sv.apply_swap(gate.target, gate.target2);
        return;
    }
}

namespace {

void run_block_fused(Statevector &sv, const Block &block) {
    if (std::holds_alternative<DiagSemantics>(block.semantics)) {
        const auto &sem = std::get<DiagSemantics>(block.semantics);
        sv.bulk_phase_by_code(sem.reg, sem.table);
    } else if (std::holds_alternative<XorSemantics>(block.semantics)) {
        const auto &sem = std::get<XorSemantics>(block.semantics);
        sv.bulk_xor_by_code(sem.src, sem.dst,
                            [&](std::uint64_t c) { return sem.xor_table[c]; });
    } else if (std::holds_alternative<FiberAddSemantics>(block.semantics)) {
        const auto &sem = std::get<FiberAddSemantics>(block.semantics);
        sv.bulk_fiber_add(sem.target, sem.ctx,
                          [&](std::uint64_t c) { return sem.delta_table[c]; });
    } else {
        for (const auto &g : block.gates) {
            apply_gate(sv, g);
        }
        return;
    }
    // Amplitudes were updated in bulk; account the equivalent gate stream.
    for (const auto &g : block.gates) {
        sv.tally().count(g.kind, static_cast<int>(g.controls.size()));
    }
}

} // namespace

void run(Statevector &sv, const Circuit &circuit, ExecMode mode) {
    const bool fused =
        mode == ExecMode::fused ||
        (mode == ExecMode::automatic && sv.n_qubits() >= kFusedQubitThreshold);
    for (const auto &op : circuit.ops()) {
        if (std::holds_alternative<Gate>(op)) {
            apply_gate(sv, std::get<Gate>(op));
        } else if (fused) {
            run_block_fused(sv, std::get<Block>(op));
        } else {
            for (const auto &g : std::get<Block>(op).gates) {
                apply_gate(sv, g);
            }
        }
    }
}

} // namespace qgw::sim
