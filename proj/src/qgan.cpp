#include "qgw/qgan.hpp"

#include "qgw/circuit.hpp"
#include "qgw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

namespace qgw::qgan {

namespace {

constexpr double kLogClamp = 1e-12;
constexpr double kLeakySlope = 0.2;

double clamped_log(double v) { return std::log(std::max(v, kLogClamp)); }

double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal(std::mt19937_64 &rng) {
    // Box-Muller on the deterministic uniform stream.
    const double u1 = std::max(uniform01(rng), 1e-300);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// First-moment/second-moment optimizer state.
struct Adam {
    double lr, beta1, beta2;
    std::vector<double> m, v;
    std::uint64_t t = 0;

    Adam(std::size_t size, double lr_, double b1, double b2)
        : lr(lr_), beta1(b1), beta2(b2), m(size, 0.0), v(size, 0.0) {}

    void step(std::span<double> params, std::span<const double> grad) {
        ++t;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + 1e-8);
        }
    }
};

double bin_position(std::uint64_t j, int n) {
    const double denom = static_cast<double>((1ULL << n) - 1);
    return static_cast<double>(j) / denom;
}

double state_mismatch(const Statevector &state, std::span<const double> target_amplitude) {
    std::complex<double> inner = 0.0;
    for (std::size_t j = 0; j < target_amplitude.size(); ++j) {
        inner += std::conj(state.amplitude(j)) * target_amplitude[j];
    }
    return 1.0 - std::abs(inner);
}

} // namespace

void QganConfig::validate() const {
    if (n_qubits < 1 || layers < 1) {
        throw ConfigError("need at least one qubit and one layer");
    }
    if (iterations < 1) {
        throw ConfigError("need at least one training iteration");
    }
    if (shots < 1) {
        throw ConfigError("need at least one sample per side");
    }
}

Statevector pqc_apply(std::span<const double> params, int n, int layers) {
    if (static_cast<int>(params.size()) != (layers + 1) * n) {
        throw ConfigError("parameter count must be (layers + 1) * n");
    }
    auto sv = Statevector::init(n);
    for (int q = 0; q < n; ++q) {
        sv.apply_h(static_cast<std::uint32_t>(q));
    }
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < n; ++q) {
            sv.apply_ry(params[static_cast<std::size_t>(l * n + q)],
                        static_cast<std::uint32_t>(q));
        }
        for (int q = 0; q + 1 < n; ++q) {
            const std::uint32_t cs[] = {static_cast<std::uint32_t>(q)};
            sv.apply_x(static_cast<std::uint32_t>(q + 1), cs);
        }
    }
    for (int q = 0; q < n; ++q) {
        sv.apply_ry(params[static_cast<std::size_t>(layers * n + q)],
                    static_cast<std::uint32_t>(q));
    }
    return sv;
}

std::vector<double> pqc_probs(std::span<const double> params, int n, int layers) {
    const auto sv = pqc_apply(params, n, layers);
    std::vector<double> probs(sv.dimension());
    for (std::uint64_t j = 0; j < probs.size(); ++j) {
        probs[j] = std::norm(sv.amplitude(j));
    }
    return probs;
}

int Discriminator::parameter_count() {
    return kHidden + kHidden          // first layer w, b
           + kHidden * kHidden + kHidden // second layer
           + kHidden + 1;                // output layer
}

Discriminator::Discriminator() : w_(static_cast<std::size_t>(parameter_count()), 0.0) {}

Discriminator Discriminator::random_init(std::uint64_t seed) {
    Discriminator d;
    std::mt19937_64 rng(seed);
    std::size_t idx = 0;
    auto fill = [&](int count, double scale) {
        for (int i = 0; i < count; ++i) {
            d.w_[idx++] = scale * normal(rng);
        }
    };
    fill(kHidden, std::sqrt(2.0));               // w1 (fan-in 1)
    fill(kHidden, 0.0);                          // b1
    fill(kHidden * kHidden, std::sqrt(2.0 / kHidden)); // w2
    fill(kHidden, 0.0);                          // b2
    fill(kHidden, std::sqrt(2.0 / kHidden));     // w3
    fill(1, 0.0);                                // b3
    return d;
}

namespace {

struct DiscTrace {
    double a1[Discriminator::kHidden];
    double h1[Discriminator::kHidden];
    double a2[Discriminator::kHidden];
    double h2[Discriminator::kHidden];
    double z = 0.0;
    double out = 0.5;
};

DiscTrace disc_forward_trace(const std::vector<double> &w, double x) {
    constexpr int H = Discriminator::kHidden;
    const double *w1 = w.data();
    const double *b1 = w1 + H;
    const double *w2 = b1 + H;
    const double *b2 = w2 + H * H;
    const double *w3 = b2 + H;
    const double b3 = w3[H];

    DiscTrace t;
    for (int i = 0; i < H; ++i) {
        t.a1[i] = w1[i] * x + b1[i];
        t.h1[i] = t.a1[i] >= 0.0 ? t.a1[i] : kLeakySlope * t.a1[i];
    }
    for (int i = 0; i < H; ++i) {
        double acc = b2[i];
        for (int k = 0; k < H; ++k) {
            acc += w2[i * H + k] * t.h1[k];
        }
        t.a2[i] = acc;
        t.h2[i] = acc >= 0.0 ? acc : kLeakySlope * acc;
    }
    double z = b3;
    for (int i = 0; i < H; ++i) {
        z += w3[i] * t.h2[i];
    }
    t.z = z;
    t.out = 1.0 / (1.0 + std::exp(-z));
    return t;
}

} // namespace

double Discriminator::forward(double x) const { return disc_forward_trace(w_, x).out; }

double discriminator_forward(const Discriminator &d, double x) { return d.forward(x); }

void Discriminator::accumulate_gradient(double x, double scale, std::span<double> grad) const {
    constexpr int H = kHidden;
    const DiscTrace t = disc_forward_trace(w_, x);
    const double dz = scale * t.out * (1.0 - t.out); // sigmoid'

    const double *w2 = w_.data() + 2 * H;
    const double *w3 = w_.data() + 2 * H + H * H + H;
    double *g1w = grad.data();
    double *g1b = g1w + H;
    double *g2w = g1b + H;
    double *g2b = g2w + H * H;
    double *g3w = g2b + H;
    double *g3b = g3w + H;

    double dh2[H];
    for (int i = 0; i < H; ++i) {
        g3w[i] += dz * t.h2[i];
        dh2[i] = dz * w3[i] * (t.a2[i] >= 0.0 ? 1.0 : kLeakySlope);
    }
    *g3b += dz;
    double dh1[H] = {};
    for (int i = 0; i < H; ++i) {
        g2b[i] += dh2[i];
        for (int k = 0; k < H; ++k) {
            g2w[i * H + k] += dh2[i] * t.h1[k];
            dh1[k] += dh2[i] * w2[i * H + k];
        }
    }
    for (int k = 0; k < H; ++k) {
        const double da = dh1[k] * (t.a1[k] >= 0.0 ? 1.0 : kLeakySlope);
        g1w[k] += da * x;
        g1b[k] += da;
    }
}

std::pair<double, double> losses(std::span<const double> gen_samples,
                                 std::span<const double> real_samples, const Discriminator &d) {
    if (gen_samples.empty() || real_samples.empty()) {
        throw ConfigError("losses need nonempty sample sets");
    }
    double lg = 0.0;
    double ld_fake = 0.0;
    for (double x : gen_samples) {
        const double out = d.forward(x);
        lg -= clamped_log(out);
        ld_fake += clamped_log(1.0 - out);
    }
    lg /= static_cast<double>(gen_samples.size());
    ld_fake /= static_cast<double>(gen_samples.size());
    double ld_real = 0.0;
    for (double x : real_samples) {
        ld_real += clamped_log(d.forward(x));
    }
    ld_real /= static_cast<double>(real_samples.size());
    return {lg, ld_real + ld_fake};
}

TrainResult train(std::span<const double> target_mass, const QganConfig &config) {
    config.validate();
    const int n = config.n_qubits;
    const int L = config.layers;
    if (target_mass.size() != (1ULL << n)) {
        throw ConfigError("target mass length must be 2^n");
    }
    const std::uint64_t bins = target_mass.size();

    // Normalized target distribution and amplitudes.
    double total = 0.0;
    for (double p : target_mass) {
        total += p;
    }
    std::vector<double> p_target(bins);
    std::vector<double> target_amp(bins);
    for (std::uint64_t j = 0; j < bins; ++j) {
        p_target[j] = target_mass[j] / total;
        target_amp[j] = std::sqrt(p_target[j]);
    }
    std::vector<double> xs(bins);
    for (std::uint64_t j = 0; j < bins; ++j) {
        xs[j] = bin_position(j, n);
    }

    std::mt19937_64 rng(config.seed);
    Discriminator disc = Discriminator::random_init(rng());
    const std::size_t n_params = static_cast<std::size_t>((L + 1) * n);
    std::vector<double> params(n_params, 0.0);
    for (auto &p : params) {
        p = config.init_spread * normal(rng);
    }

    Adam gen_opt(n_params, config.learning_rate, config.beta1, config.beta2);
    Adam disc_opt(disc.weights().size(), config.learning_rate, config.beta1, config.beta2);

    // Weight vectors over the bins: exact expectations, or empirical counts
    // in finite-shot mode.
    auto sample_weights = [&](std::span<const double> dist) {
        std::vector<double> w(dist.begin(), dist.end());
        if (!config.finite_shot) {
            return w;
        }
        std::vector<double> cdf(dist.size());
        std::partial_sum(dist.begin(), dist.end(), cdf.begin());
        std::fill(w.begin(), w.end(), 0.0);
        for (std::uint64_t s = 0; s < config.shots; ++s) {
            const double u = cdf.back() * uniform01(rng);
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            w[std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), w.size() - 1)] +=
                1.0 / static_cast<double>(config.shots);
        }
        return w;
    };

    std::vector<double> scores(bins); // -log D per bin, refreshed per iteration
    auto expected_score = [&](std::span<const double> q) {
        double acc = 0.0;
        for (std::uint64_t j = 0; j < bins; ++j) {
            acc += q[j] * scores[j];
        }
        return acc;
    };

    TrainResult result;
    result.history.reserve(static_cast<std::size_t>(config.iterations));

    std::vector<double> grad_d(disc.weights().size());
    std::vector<double> grad_g(n_params);
    std::vector<double> shifted(n_params);

    for (int iter = 0; iter < config.iterations; ++iter) {
        const auto q = pqc_probs(params, n, L);
        const auto w_fake = sample_weights(q);
        const auto w_real = sample_weights(p_target);

        // Discriminator ascent on L_D; several steps so the scorer keeps up
        // with the moving generated distribution.
        double loss_d = 0.0;
        for (int step = 0; step < std::max(config.disc_steps, 1); ++step) {
            std::fill(grad_d.begin(), grad_d.end(), 0.0);
            loss_d = 0.0;
            for (std::uint64_t j = 0; j < bins; ++j) {
                if (w_real[j] > 0.0) {
                    const double out = disc.forward(xs[j]);
                    loss_d += w_real[j] * clamped_log(out);
                    // d/dw of -w log D (gradient of the negated objective).
                    disc.accumulate_gradient(xs[j], -w_real[j] / std::max(out, kLogClamp),
                                             grad_d);
                }
                if (w_fake[j] > 0.0) {
                    const double out = disc.forward(xs[j]);
                    loss_d += w_fake[j] * clamped_log(1.0 - out);
                    disc.accumulate_gradient(xs[j], w_fake[j] / std::max(1.0 - out, kLogClamp),
                                             grad_d);
                }
            }
            disc_opt.step(disc.weights(), grad_d);
        }

        // Generator descent on L_G via parameter shift.
        for (std::uint64_t j = 0; j < bins; ++j) {
            scores[j] = -clamped_log(disc.forward(xs[j]));
        }
        double loss_g = 0.0;
        for (std::uint64_t j = 0; j < bins; ++j) {
            loss_g += w_fake[j] * scores[j];
        }
        for (std::size_t k = 0; k < n_params; ++k) {
            std::copy(params.begin(), params.end(), shifted.begin());
            shifted[k] = params[k] + std::numbers::pi / 2.0;
            const double plus = expected_score(pqc_probs(shifted, n, L));
            shifted[k] = params[k] - std::numbers::pi / 2.0;
            const double minus = expected_score(pqc_probs(shifted, n, L));
            grad_g[k] = 0.5 * (plus - minus);
        }
        gen_opt.step(params, grad_g);

        const auto state = pqc_apply(params, n, L);
        const double mm = state_mismatch(state, target_amp);
        result.history.push_back(TrainHistoryRow{loss_g, loss_d, mm});

        if (!std::isfinite(loss_g) || !std::isfinite(loss_d) || !std::isfinite(mm)) {
            throw DivergenceError("non-finite loss at iteration " + std::to_string(iter),
                                  result.history);
        }
        if (mm < result.best_mismatch) {
            result.best_mismatch = mm;
            result.best_iteration = iter;
            result.best_params = params;
        }
    }
    result.final_params = params;
    if (result.best_params.empty()) {
        result.best_params = params;
    }
    return result;
}

void write_history_csv(const std::string &path, const std::vector<TrainHistoryRow> &history) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << "iter,loss_g,loss_d,mismatch\n";
    char buf[128];
    for (std::size_t i = 0; i < history.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g", i, history[i].loss_g,
                      history[i].loss_d, history[i].mismatch);
        out << buf << '\n';
    }
}

std::string params_to_json(std::span<const double> params, int n, int layers) {
    nlohmann::json j;
    j["n_qubits"] = n;
    j["layers"] = layers;
    j["params"] = std::vector<double>(params.begin(), params.end());
    return j.dump(2);
}

std::vector<double> params_from_json(const std::string &text, int &n, int &layers) {
    const auto j = nlohmann::json::parse(text);
    n = j.at("n_qubits").get<int>();
    layers = j.at("layers").get<int>();
    return j.at("params").get<std::vector<double>>();
}

} // namespace qgw::qgan
