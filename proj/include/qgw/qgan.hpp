#pragma once

#include "qgw/errors.hpp"
#include "qgw/statevector.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qgw::qgan {

using sim::Statevector;

struct QganConfig {
    int n_qubits = 6;
    int layers = 20;
    int iterations = 1500;
    std::uint64_t shots = 10000; // S per side in finite-shot mode
    double learning_rate = 0.01;
    double beta1 = 0.7;
    double beta2 = 0.999;
    std::uint64_t seed = 0;
    /// Finite-shot mode feeds the discriminator sampled ensembles instead of
    /// exact expectations; generator gradients stay parameter-shift exact.
    bool finite_shot = false;
    /// Scorer updates per generator update; the scorer must track the moving
    /// generated distribution or the game stalls.
    int disc_steps = 5;
    /// Spread of the random circuit-parameter initialization; zero starts
    /// from the uniform superposition.
    double init_spread = 0.0;

    void validate() const;
};

/// Hardware-style ansatz: Hadamards, then `layers` repetitions of per-qubit
/// Ry rotations followed by the CX chain, then a final Ry layer. Parameter
/// count (layers + 1) * n, layer-major; all amplitudes real.
Statevector pqc_apply(std::span<const double> params, int n, int layers);

/// Probabilities |amplitude|^2 of the ansatz state.
std::vector<double> pqc_probs(std::span<const double> params, int n, int layers);

/// Fully connected 1-16-16-1 scorer, leaky ReLU hidden units, sigmoid output
/// strictly inside (0, 1). Inputs are bin indices normalized to [0, 1].
class Discriminator {
  public:
    Discriminator();
    static Discriminator random_init(std::uint64_t seed);

    double forward(double x) const;

    std::vector<double> &weights() { return w_; }
    const std::vector<double> &weights() const { return w_; }

    /// d(output)/d(weights) accumulated as grad += scale * dD/dw at x.
    void accumulate_gradient(double x, double scale, std::span<double> grad) const;

    static constexpr int kHidden = 16;
    static int parameter_count();

  private:
    std::vector<double> w_;
};

double discriminator_forward(const Discriminator &d, double x);

/// Sample-mean losses: L_G = -mean log D(fake), L_D = mean [log D(real) +
/// log(1 - D(fake))]; logs clamped at 1e-12.
std::pair<double, double> losses(std::span<const double> gen_samples,
                                 std::span<const double> real_samples, const Discriminator &d);

struct TrainHistoryRow {
    double loss_g;
    double loss_d;
    double mismatch;
};

struct TrainResult {
    std::vector<double> best_params;
    std::vector<double> final_params;
    std::vector<TrainHistoryRow> history;
    double best_mismatch = 1.0;
    int best_iteration = -1;
};

/// Thrown when a loss turns non-finite; carries the history so far.
class DivergenceError : public TrainingError {
  public:
    DivergenceError(const std::string &msg, std::vector<TrainHistoryRow> history)
        : TrainingError(msg), history_(std::move(history)) {}
    const std::vector<TrainHistoryRow> &history() const { return history_; }

  private:
    std::vector<TrainHistoryRow> history_;
};

/// Alternating Adam ascent on the discriminator and descent on the generator;
/// generator gradients via the parameter-shift rule on exact statevector
/// expectations of the discriminator score. Returns the best-mismatch
/// parameters. Deterministic per seed.
TrainResult train(std::span<const double> target_mass, const QganConfig &config);

void write_history_csv(const std::string &path, const std::vector<TrainHistoryRow> &history);
std::string params_to_json(std::span<const double> params, int n, int layers);
std::vector<double> params_from_json(const std::string &text, int &n, int &layers);

} // namespace qgw::qgan
