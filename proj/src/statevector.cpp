#include "qgw/statevector.hpp"

#include "qgw/errors.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

namespace qgw::sim {

namespace {

constexpr int kMaxQubits = 28;

std::uint64_t g_memory_cap_bytes = 6ULL << 30;

/// Next index i' > i with (i' & mask) == val. Terminates past 2^n because the
/// carry escapes into a bit above the mask.
inline std::uint64_t next_masked(std::uint64_t i, std::uint64_t mask, std::uint64_t val) {
    return (((i | mask) + 1) & ~mask) | val;
}

/// k-th index (by ascending order) satisfying (i & mask) == val.
inline std::uint64_t nth_masked(std::uint64_t k, std::uint64_t mask, std::uint64_t val,
                                int n_bits) {
    std::uint64_t idx = val;
    for (int b = 0; b < n_bits && k; ++b) {
        if (!((mask >> b) & 1ULL)) {
            idx |= (k & 1ULL) << b;
            k >>= 1;
        }
    }
    return idx;
}

constexpr std::uint64_t kParallelThreshold = 1ULL << 21;

/// Two-way split used by the amplitude sweeps; body(begin, end) over a
/// compressed counter range.
template <typename Body> void parallel_chunks(std::uint64_t count, Body &&body) {
    static const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (count < kParallelThreshold || hw < 2) {
        body(0, count);
        return;
    }
    const unsigned n_threads = std::min<unsigned>(hw, 4);
    std::vector<std::thread> workers;
    const std::uint64_t chunk = (count + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
        const std::uint64_t b = std::min<std::uint64_t>(t * chunk, count);
        const std::uint64_t e = std::min<std::uint64_t>(b + chunk, count);
        if (b >= e) {
            break;
        }
        workers.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto &w : workers) {
        w.join();
    }
}

template <typename T, typename PairFn>
void sweep_pairs(std::vector<std::complex<T>> &amps, std::uint32_t target, std::uint64_t cmask,
                 int n_bits, PairFn &&fn) {
    const std::uint64_t tbit = 1ULL << target;
    const std::uint64_t mask = cmask | tbit;
    const std::uint64_t count = (1ULL << n_bits) >> std::popcount(mask);
    parallel_chunks(count, [&](std::uint64_t kb, std::uint64_t ke) {
        std::uint64_t i = nth_masked(kb, mask, cmask, n_bits);
        for (std::uint64_t k = kb; k < ke; ++k) {
            fn(amps[i], amps[i | tbit]);
            i = next_masked(i, mask, cmask);
        }
    });
}

std::uint64_t checked_control_mask(int n_bits, std::span<const std::uint32_t> controls,
                                   std::initializer_list<std::uint32_t> targets) {
    std::uint64_t mask = 0;
    std::uint64_t tmask = 0;
    for (auto t : targets) {
        if (t >= static_cast<std::uint32_t>(n_bits)) {
            throw CircuitError("target qubit " + std::to_string(t) + " out of range");
        }
        if (tmask & (1ULL << t)) {
            throw CircuitError("duplicate target qubit " + std::to_string(t));
        }
        tmask |= 1ULL << t;
    }
    for (auto c : controls) {
        if (c >= static_cast<std::uint32_t>(n_bits)) {
            throw CircuitError("control qubit " + std::to_string(c) + " out of range");
        }
        const std::uint64_t bit = 1ULL << c;
        if ((mask | tmask) & bit) {
            throw CircuitError("control qubit " + std::to_string(c) + " overlaps");
        }
        mask |= bit;
    }
    return mask;
}

} // namespace

// ---- Register --------------------------------------------------------------

Register Register::range(std::uint32_t start, int width) {
    Register r;
    r.qubits.resize(static_cast<std::size_t>(width));
    std::iota(r.qubits.begin(), r.qubits.end(), start);
    return r;
}

std::uint64_t Register::mask() const {
    std::uint64_t m = 0;
    for (auto q : qubits) {
        m |= 1ULL << q;
    }
    return m;
}

bool Register::is_ascending_run() const {
    for (std::size_t i = 1; i < qubits.size(); ++i) {
        if (qubits[i] != qubits[i - 1] + 1) {
            return false;
        }
    }
    return true;
}

std::uint64_t Register::deposit(std::uint64_t code) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        idx |= ((code >> i) & 1ULL) << qubits[i];
    }
    return idx;
}

std::uint64_t Register::extract(std::uint64_t index) const {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        code |= ((index >> qubits[i]) & 1ULL) << i;
    }
    return code;
}

// ---- RegisterMap -----------------------------------------------------------

void RegisterMap::add(const std::string &name, Register reg) {
    if (registers_.count(name)) {
        throw CircuitError("register '" + name + "' already defined");
    }
    registers_.emplace(name, std::move(reg));
}

const Register &RegisterMap::at(const std::string &name) const {
    auto it = registers_.find(name);
    if (it == registers_.end()) {
        throw CircuitError("no register named '" + name + "'");
    }
    return it->second;
}

bool RegisterMap::contains(const std::string &name) const { return registers_.count(name) > 0; }

void RegisterMap::validate(int n_qubits) const {
    std::uint64_t seen = 0;
    for (const auto &[name, reg] : registers_) {
        for (auto q : reg.qubits) {
            if (q >= static_cast<std::uint32_t>(n_qubits)) {
                throw CircuitError("register '" + name + "' exceeds qubit count");
            }
            if (seen & (1ULL << q)) {
                throw CircuitError("register '" + name + "' overlaps another register");
            }
            seen |= 1ULL << q;
        }
    }
}

// ---- GateTally -------------------------------------------------------------

std::string to_string(GateKind kind) {
    switch (kind) {
    case GateKind::X:
        return "X";
    case GateKind::H:
        return "H";
    case GateKind::Ry:
        return "Ry";
    case GateKind::Rz:
        return "Rz";
    case GateKind::Phase:
        return "P";
    case GateKind::Swap:
        return "SWAP";
    }
    return "?";
}

void GateTally::count(GateKind kind, int n_controls) {
    const int bucket = std::min(n_controls, kControlBuckets - 1);
    ++counts_[static_cast<std::size_t>(kind)][static_cast<std::size_t>(bucket)];

    if (kind == GateKind::Swap) {
        cnot_count_ += 3;
        return;
    }
    if (n_controls == 0) {
        return;
    }
    if (kind == GateKind::X) {
        cnot_count_ += gatecost::cnx_cost(n_controls, policy_);
        return;
    }
    if (n_controls == 1) {
        cnot_count_ += 2;
        return;
    }
    if (n_controls == 2) {
        cnot_count_ += 8;
        return;
    }
    throw CircuitError("no decomposition cost defined for " + std::to_string(n_controls) +
                       "-controlled " + to_string(kind));
}

void GateTally::reset() {
    cnot_count_ = 0;
    for (auto &row : counts_) {
        row.fill(0);
    }
}

std::map<std::string, std::uint64_t> GateTally::primitive_counts() const {
    std::map<std::string, std::uint64_t> out;
    for (int kind = 0; kind < kKinds; ++kind) {
        for (int c = 0; c < kControlBuckets; ++c) {
            const auto n = counts_[static_cast<std::size_t>(kind)][static_cast<std::size_t>(c)];
            if (n == 0) {
                continue;
            }
            std::string key(static_cast<std::size_t>(c), 'C');
            key += to_string(static_cast<GateKind>(kind));
            out[key] = n;
        }
    }
    return out;
}

// ---- Statevector -----------------------------------------------------------

void Statevector::set_memory_cap_bytes(std::uint64_t bytes) { g_memory_cap_bytes = bytes; }
std::uint64_t Statevector::memory_cap_bytes() { return g_memory_cap_bytes; }

Statevector Statevector::init(int n_qubits, Precision precision) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("n_qubits " + std::to_string(n_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
    const std::uint64_t bytes_per_amp = precision == Precision::f64 ? 16 : 8;
    const std::uint64_t estimate = (1ULL << n_qubits) * bytes_per_amp;
    if (estimate > g_memory_cap_bytes) {
        throw CapacityError("state of " + std::to_string(n_qubits) + " qubits needs " +
                            std::to_string(estimate) + " bytes, above the configured cap of " +
                            std::to_string(g_memory_cap_bytes));
    }
    Statevector sv;
    sv.n_qubits_ = n_qubits;
    sv.precision_ = precision;
    if (precision == Precision::f64) {
        std::vector<std::complex<double>> data(1ULL << n_qubits);
        data[0] = 1.0;
        sv.data_ = std::move(data);
    } else {
        std::vector<std::complex<float>> data(1ULL << n_qubits);
        data[0] = 1.0f;
        sv.data_ = std::move(data);
    }
    return sv;
}

template <typename Visitor> void Statevector::visit(Visitor &&v) { std::visit(v, data_); }
template <typename Visitor> void Statevector::visit(Visitor &&v) const { std::visit(v, data_); }

std::complex<double> Statevector::amplitude(std::uint64_t index) const {
    if (index >= dimension()) {
        throw CircuitError("amplitude index out of range");
    }
    std::complex<double> out;
    visit([&](const auto &amps) { out = std::complex<double>(amps[index]); });
    return out;
}

void Statevector::set_amplitude(std::uint64_t index, std::complex<double> value) {
    if (index >= dimension()) {
        throw CircuitError("amplitude index out of range");
    }
    visit([&](auto &amps) {
        using T = typename std::decay_t<decltype(amps)>::value_type;
        amps[index] = static_cast<T>(value);
    });
}

double Statevector::norm_sq() const {
    double total = 0.0;
    visit([&](const auto &amps) {
        double acc = 0.0;
        for (const auto &a : amps) {
            acc += static_cast<double>(a.real()) * a.real() +
                   static_cast<double>(a.imag()) * a.imag();
        }
        total = acc;
    });
    return total;
}

double Statevector::probability_of(const Register &reg, std::uint64_t code) const {
    const std::uint64_t mask = reg.mask();
    const std::uint64_t val = reg.deposit(code);
    double total = 0.0;
    visit([&](const auto &amps) {
        double acc = 0.0;
        for (std::uint64_t i = val; i < amps.size(); i = next_masked(i, mask, val)) {
            acc += static_cast<double>(amps[i].real()) * amps[i].real() +
                   static_cast<double>(amps[i].imag()) * amps[i].imag();
        }
        total = acc;
    });
    return total;
}

void Statevector::apply_x(std::uint32_t target, std::span<const std::uint32_t> controls) {
    const std::uint64_t cmask = checked_control_mask(n_qubits_, controls, {target});
    visit([&](auto &amps) {
        sweep_pairs(amps, target, cmask, n_qubits_, [](auto &a0, auto &a1) { std::swap(a0, a1); });
    });
    tally_.count(GateKind::X, static_cast<int>(controls.size()));
}

void Statevector::apply_h(std::uint32_t target, std::span<const std::uint32_t> controls) {
    const std::uint64_t cmask = checked_control_mask(n_qubits_, controls, {target});
    visit([&](auto &amps) {
        using T = typename std::decay_t<decltype(amps)>::value_type::value_type;
        const T inv_sqrt2 = static_cast<T>(1.0 / std::sqrt(2.0));
        sweep_pairs(amps, target, cmask, n_qubits_, [inv_sqrt2](auto &a0, auto &a1) {
            const auto t0 = a0;
            a0 = inv_sqrt2 * (t0 + a1);
            a1 = inv_sqrt2 * (t0 - a1);
        });
    });
    tally_.count(GateKind::H, static_cast<int>(controls.size()));
}

void Statevector::apply_ry(double theta, std::uint32_t target,
                           std::span<const std::uint32_t> controls) {
    const std::uint64_t cmask = checked_control_mask(n_qubits_, controls, {target});
    visit([&](auto &amps) {
        using T = typename std::decay_t<decltype(amps)>::value_type::value_type;
        const T c = static_cast<T>(std::cos(theta / 2));
        const T s = static_cast<T>(std::sin(theta / 2));
        sweep_pairs(amps, target, cmask, n_qubits_, [c, s](auto &a0, auto &a1) {
            const auto t0 = a0;
            a0 = c * t0 - s * a1;
            a1 = s * t0 + c * a1;
        });
    });
    tally_.count(GateKind::Ry, static_cast<int>(controls.size()));
}

void Statevector::apply_rz(double theta, std::uint32_t target,
                           std::span<const std::uint32_t> controls) {
    const std::uint64_t cmask = checked_control_mask(n_qubits_, controls, {target});
    const std::uint64_t tbit = 1ULL << target;
    visit([&](auto &amps) {
        using C = typename std::decay_t<decltype(amps)>::value_type;
        const auto p0 = static_cast<C>(std::polar(1.0, -theta / 2));
        const auto p1 = static_cast<C>(std::polar(1.0, theta / 2));
        const std::uint64_t count = amps.size() >> std::popcount(cmask);
        parallel_chunks(count, [&](std::uint64_t kb, std::uint64_t ke) {
            std::uint64_t i = nth_masked(kb, cmask, cmask, n_qubits_);
            for (std::uint64_t k = kb; k < ke; ++k) {
                amps[i] *= (i & tbit) ? p1 : p0;
                i = next_masked(i, cmask, cmask);
            }
        });
    });
    tally_.count(GateKind::Rz, static_cast<int>(controls.size()));
}

void Statevector::apply_phase(double theta, std::uint32_t target,
                              std::span<const std::uint32_t> controls) {
    const std::uint64_t cmask = checked_control_mask(n_qubits_, controls, {target});
    const std::uint64_t mask = cmask | (1ULL << target);
    visit([&](auto &amps) {
        using C = typename std::decay_t<decltype(amps)>::value_type;
        const auto ph = static_cast<C>(std::polar(1.0, theta));
        const std::uint64_t count = amps.size() >> std::popcount(mask);
        parallel_chunks(count, [&](std::uint64_t kb, std::uint64_t ke) {
            std::uint64_t i = nth_masked(kb, mask, mask, n_qubits_);
            for (std::uint64_t k = kb; k < ke; ++k) {
                amps[i] *= ph;
                i = next_masked(i, mask, mask);
            }
        });
    });
    tally_.count(GateKind::Phase, static_cast<int>(controls.size()));
}

void Statevector::apply_swap(std::uint32_t a, std::uint32_t b) {
    checked_control_mask(n_qubits_, {}, {a, b});
    const std::uint64_t abit = 1ULL << a;
    const std::uint64_t bbit = 1ULL << b;
    const std::uint64_t mask = abit | bbit;
    visit([&](auto &amps) {
        const std::uint64_t count = amps.size() >> 2;
        parallel_chunks(count, [&](std::uint64_t kb, std::uint64_t ke) {
            std::uint64_t i = nth_masked(kb, mask, abit, n_qubits_);
            for (std::uint64_t k = kb; k < ke; ++k) {
                std::swap(amps[i], amps[(i ^ abit) | bbit]);
                i = next_masked(i, mask, abit);
            }
        });
    });
    tally_.count(GateKind::Swap, 0);
}

void Statevector::bulk_phase_by_code(const Register &reg,
                                     const std::vector<std::complex<double>> &table) {
    if (table.size() != (1ULL << reg.width())) {
        throw CircuitError("phase table size does not match register width");
    }
    visit([&](auto &amps) {
        using C = typename std::decay_t<decltype(amps)>::value_type;
        std::vector<C> tab(table.size());
        for (std::size_t i = 0; i < table.size(); ++i) {
            tab[i] = static_cast<C>(table[i]);
        }
        // Contiguous registers reduce code extraction to shift-and-mask.
        if (reg.is_ascending_run() && !reg.empty()) {
            const std::uint32_t lo = reg.qubits.front();
            const std::uint64_t m = (1ULL << reg.width()) - 1;
            parallel_chunks(amps.size(), [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    amps[i] *= tab[(i >> lo) & m];
                }
            });
        } else {
            parallel_chunks(amps.size(), [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    amps[i] *= tab[reg.extract(i)];
                }
            });
        }
    });
}

void Statevector::bulk_xor_by_code(const Register &src, const Register &dst,
                                   const std::function<std::uint64_t(std::uint64_t)> &xor_code) {
    if ((src.mask() & dst.mask()) != 0) {
        throw CircuitError("xor map source and destination registers overlap");
    }
    std::vector<std::uint64_t> masks(1ULL << src.width());
    for (std::uint64_t c = 0; c < masks.size(); ++c) {
        const std::uint64_t code = xor_code(c);
        if (code >> dst.width()) {
            throw CircuitError("xor map code exceeds destination register width");
        }
        masks[c] = dst.deposit(code);
    }
    visit([&](auto &amps) {
        parallel_chunks(amps.size(), [&](std::uint64_t b, std::uint64_t e) {
            for (std::uint64_t i = b; i < e; ++i) {
                const std::uint64_t j = i ^ masks[src.extract(i)];
                if (j > i) {
                    std::swap(amps[i], amps[j]);
                }
            }
        });
    });
}

void Statevector::bulk_fiber_add(const Register &target, const Register &ctx,
                                 const std::function<std::uint64_t(std::uint64_t)> &delta) {
    if ((target.mask() & ctx.mask()) != 0) {
        throw CircuitError("fiber add target and context registers overlap");
    }
    const int w = target.width();
    const std::uint64_t fdim = 1ULL << w;
    const std::uint64_t fmask = target.mask();
    std::vector<std::uint64_t> offs(fdim);
    for (std::uint64_t c = 0; c < fdim; ++c) {
        offs[c] = target.deposit(c);
    }
    std::vector<std::uint64_t> deltas(1ULL << ctx.width());
    for (std::uint64_t c = 0; c < deltas.size(); ++c) {
        deltas[c] = delta(c) & (fdim - 1);
    }
    visit([&](auto &amps) {
        using C = typename std::decay_t<decltype(amps)>::value_type;
        const std::uint64_t count = amps.size() >> w;
        parallel_chunks(count, [&](std::uint64_t kb, std::uint64_t ke) {
            std::vector<C> tmp(fdim);
            std::uint64_t base = nth_masked(kb, fmask, 0, n_qubits_);
            for (std::uint64_t k = kb; k < ke; ++k) {
                const std::uint64_t d = deltas[ctx.extract(base)];
                if (d != 0) {
                    for (std::uint64_t c = 0; c < fdim; ++c) {
                        tmp[c] = amps[base | offs[c]];
                    }
                    for (std::uint64_t c = 0; c < fdim; ++c) {
                        amps[base | offs[(c + d) & (fdim - 1)]] = tmp[c];
                    }
                }
                base = next_masked(base, fmask, 0);
            }
        });
    });
}

std::vector<double> Statevector::marginal_probs(const Register &reg) const {
    if (reg.empty()) {
        throw CircuitError("marginal over an empty register");
    }
    std::vector<double> probs(1ULL << reg.width(), 0.0);
    visit([&](const auto &amps) {
        if (reg.is_ascending_run()) {
            const std::uint32_t lo = reg.qubits.front();
            const std::uint64_t m = (1ULL << reg.width()) - 1;
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                probs[(i >> lo) & m] += static_cast<double>(amps[i].real()) * amps[i].real() +
                                        static_cast<double>(amps[i].imag()) * amps[i].imag();
            }
        } else {
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                probs[reg.extract(i)] += static_cast<double>(amps[i].real()) * amps[i].real() +
                                         static_cast<double>(amps[i].imag()) * amps[i].imag();
            }
        }
    });
    return probs;
}

std::map<std::string, std::uint64_t> Statevector::measure_counts(const Register &reg,
                                                                 std::uint64_t shots,
                                                                 std::uint64_t seed) const {
    if (shots < 1) {
        throw CircuitError("shots must be >= 1");
    }
    const auto probs = marginal_probs(reg);
    std::vector<double> cdf(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    const double total = cdf.back();

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = total * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf.begin()), probs.size() - 1);
        ++counts[idx];
    }

    std::map<std::string, std::uint64_t> histogram;
    for (std::size_t code = 0; code < counts.size(); ++code) {
        if (counts[code] == 0) {
            continue;
        }
        std::string label(static_cast<std::size_t>(reg.width()), '0');
        for (int b = 0; b < reg.width(); ++b) {
            if ((code >> b) & 1U) {
                label[static_cast<std::size_t>(reg.width() - 1 - b)] = '1';
            }
        }
        histogram[label] = counts[code];
    }
    return histogram;
}

std::vector<std::complex<double>> Statevector::extract_register_state(const Register &reg) const {
    std::vector<std::complex<double>> out(1ULL << reg.width());
    visit([&](const auto &amps) {
        for (std::uint64_t c = 0; c < out.size(); ++c) {
            out[c] = std::complex<double>(amps[reg.deposit(c)]);
        }
    });
    return out;
}

double Statevector::residual_mass_outside_zero(const std::vector<Register> &regs) const {
    std::uint64_t mask = 0;
    for (const auto &r : regs) {
        mask |= r.mask();
    }
    double total = 0.0;
    visit([&](const auto &amps) {
        double acc = 0.0;
        for (std::uint64_t i = 0; i < amps.size(); ++i) {
            if (i & mask) {
                acc += static_cast<double>(amps[i].real()) * amps[i].real() +
                       static_cast<double>(amps[i].imag()) * amps[i].imag();
            }
        }
        total = acc;
    });
    return total;
}

void Statevector::embed(const Statevector &small, const Register &where) {
    if (small.n_qubits() != where.width()) {
        throw CircuitError("embedded state width does not match register");
    }
    visit([&](auto &amps) {
        using C = typename std::decay_t<decltype(amps)>::value_type;
        std::fill(amps.begin(), amps.end(), C{});
        for (std::uint64_t c = 0; c < small.dimension(); ++c) {
            amps[where.deposit(c)] = static_cast<C>(small.amplitude(c));
        }
    });
}

void Statevector::dump_csv(const std::string &path) const {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << "index,bitstring,re,im\n";
    char buf[64];
    visit([&](const auto &amps) {
        for (std::uint64_t i = 0; i < amps.size(); ++i) {
            std::string bits(static_cast<std::size_t>(n_qubits_), '0');
            for (int b = 0; b < n_qubits_; ++b) {
                if ((i >> b) & 1ULL) {
                    bits[static_cast<std::size_t>(n_qubits_ - 1 - b)] = '1';
                }
            }
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", static_cast<double>(amps[i].real()),
                          static_cast<double>(amps[i].imag()));
            out << i << ',' << bits << ',' << buf << '\n';
        }
    });
}

double fidelity(const Statevector &a, const Statevector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw ConfigError("fidelity of states with different qubit counts");
    }
    std::complex<double> inner = 0.0;
    for (std::uint64_t i = 0; i < a.dimension(); ++i) {
        inner += std::conj(a.amplitude(i)) * b.amplitude(i);
    }
    return std::norm(inner);
}

double fidelity(const Statevector &a, const std::vector<std::complex<double>> &target) {
    if (a.dimension() != target.size()) {
        throw ConfigError("fidelity of states with different dimensions");
    }
    std::complex<double> inner = 0.0;
    for (std::uint64_t i = 0; i < target.size(); ++i) {
        if (target[i] != 0.0) {
            inner += std::conj(a.amplitude(i)) * target[i];
        }
    }
    return std::norm(inner);
}

double fidelity(const std::vector<std::complex<double>> &a,
                const std::vector<std::complex<double>> &b) {
    if (a.size() != b.size()) {
        throw ConfigError("fidelity of states with different dimensions");
    }
    std::complex<double> inner = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inner += std::conj(a[i]) * b[i];
    }
    return std::norm(inner);
}

double mismatch_from_fidelity(double fidelity_value) { return 1.0 - std::sqrt(fidelity_value); }

} // namespace qgw::sim
