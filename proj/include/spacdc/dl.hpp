#ifndef SPACDC_DL_HPP
#define SPACDC_DL_HPP

#include <cstdint>
#include <vector>

#include "spacdc/cluster.hpp"
#include "spacdc/matrix.hpp"

namespace spacdc {

enum class Activation { Relu, Sigmoid, Tanh, Identity };

Activation parse_activation(const std::string& name);
RealMatrix activate(Activation act, const RealMatrix& z);
RealMatrix activate_deriv(Activation act, const RealMatrix& z);

/// Fully-connected network: weights[l] is M_{l+1} x M_l against
/// layer_sizes = {M_0 .. M_L}; biases are column vectors.
struct NetworkParams {
    std::vector<std::size_t> layer_sizes;
    std::vector<RealMatrix> weights;
    std::vector<RealMatrix> biases;

    std::size_t depth() const { return weights.size(); }
    void validate() const;
    static NetworkParams random_init(const std::vector<std::size_t>& sizes,
                                     std::uint64_t seed);
};

struct NetSpec {
    Activation hidden = Activation::Relu;
    Activation output = Activation::Sigmoid;
};

/// activations[0] is the input batch (columns are samples); activations[l]
/// and preacts[l-1] hold layer l's output and pre-activation.
struct ForwardPass {
    std::vector<RealMatrix> activations;
    std::vector<RealMatrix> preacts;
};

ForwardPass forward(const NetworkParams& params, const RealMatrix& x,
                    const NetSpec& spec = {});

/// Mean squared-error loss (1/2B) * sum_i ||a_i - y_i||^2 over batch columns.
double squared_error_loss(const RealMatrix& out, const RealMatrix& labels);
/// Fraction of columns classified correctly (threshold 0.5 for one output
/// row, argmax otherwise).
double accuracy(const RealMatrix& out, const RealMatrix& labels);

/// Everything a coded delta job needs from the surrounding run, plus the
/// virtual-time ledger those jobs accumulate into.
struct CodedBackend {
    std::vector<WorkerProfile> profiles;
    CodecConfig codec;
    WaitPolicy wait;
    CurveParams curve;
    double mask_scale = 1.0;
    int scale_bits = 24;
    bool encrypt = true;
    double jitter_ms = 0.0;
    std::uint64_t seed = 0;

    std::uint64_t jobs_run = 0;
    double virtual_ms = 0.0;
};

/// Coded evaluation of the backprop product theta^T * delta_next, Hadamard'd
/// with sigma'(tau): theta^T is partitioned into row blocks, the blocks are
/// masked/encoded and shipped through the cluster with delta_next broadcast,
/// and the decoded block estimates are stacked back. The Hadamard factor is
/// applied after decoding: an encoded share mixes all blocks, so the
/// row-sliced factor is only meaningful once block identity is restored.
RealMatrix coded_backprop_delta(const RealMatrix& theta_next,
                                const RealMatrix& delta_next, const RealMatrix& tau,
                                Activation act, CodedBackend& backend);

/// One gradient-descent step over the batch; hidden-layer deltas go through
/// the coded cluster.
void sgd_step(NetworkParams& params, const RealMatrix& x_batch,
              const RealMatrix& y_batch, double lr, const NetSpec& spec,
              CodedBackend& backend);

enum class TrainAlgo { Spacdc, Conv };

struct TrainConfig {
    std::vector<std::size_t> layers;  // M_0 .. M_L
    double lr = 0.5;
    std::size_t epochs = 10;
    std::size_t batch = 32;
    NetSpec act;
    TrainAlgo algo = TrainAlgo::Spacdc;

    std::size_t n = 4;
    std::size_t k = 1;
    std::size_t t = 0;
    std::vector<std::size_t> stragglers;
    std::vector<std::size_t> colluders;
    double base_delay_ms = 1.0;
    double straggler_extra_ms = 10.0;
    double jitter_ms = 0.0;
    double mask_scale = 1.0;
    int scale_bits = 24;
    bool encrypt = true;

    std::uint64_t seed = 1;
};

struct TrainTrace {
    std::vector<double> loss;
    std::vector<double> accuracy;
    std::vector<double> epoch_ms;  // simulated distributed time per epoch
};

/// Columns are samples: x is d x m, y is c x m.
struct Dataset {
    RealMatrix x;
    RealMatrix y;
    std::size_t size() const { return x.cols(); }
};

struct TrainResult {
    NetworkParams params;
    TrainTrace trace;
};

/// Epoch loop over shuffled mini-batches. The spacdc variant decodes from the
/// fastest n - |stragglers| workers; the conv variant waits for everyone.
/// test_set may be null (accuracy is then measured on the training set).
TrainResult train(const Dataset& train_set, const Dataset* test_set,
                  const TrainConfig& config);

}  // namespace spacdc

#endif
