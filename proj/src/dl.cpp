#include "spacdc/dl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spacdc/errors.hpp"
#include "spacdc/rng.hpp"

namespace spacdc {

Activation parse_activation(const std::string& name) {
    if (name == "relu") return Activation::Relu;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    throw ConfigError("activation: expected relu | sigmoid | tanh | identity, got '" +
                      name + "'");
}

RealMatrix activate(Activation act, const RealMatrix& z) {
    RealMatrix out = z;
    switch (act) {
        case Activation::Relu:
            for (double& e : out.entries()) e = e > 0.0 ? e : 0.0;
            break;
        case Activation::Sigmoid:
            for (double& e : out.entries()) e = 1.0 / (1.0 + std::exp(-e));
            break;
        case Activation::Tanh:
            for (double& e : out.entries()) e = std::tanh(e);
            break;
        case Activation::Identity:
            break;
    }
    return out;
}

RealMatrix activate_deriv(Activation act, const RealMatrix& z) {
    RealMatrix out = z;
    switch (act) {
        case Activation::Relu:
            for (double& e : out.entries()) e = e > 0.0 ? 1.0 : 0.0;
            break;
        case Activation::Sigmoid:
            for (double& e : out.entries()) {
                const double s = 1.0 / (1.0 + std::exp(-e));
                e = s * (1.0 - s);
            }
            break;
        case Activation::Tanh:
            for (double& e : out.entries()) {
                const double t = std::tanh(e);
                e = 1.0 - t * t;
            }
            break;
        case Activation::Identity:
            for (double& e : out.entries()) e = 1.0;
            break;
    }
    return out;
}

void NetworkParams::validate() const {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("network: need at least input and output layers");
    }
    if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
        throw std::invalid_argument("network: weight/bias count does not match layers");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].rows() != layer_sizes[l + 1] || weights[l].cols() != layer_sizes[l]) {
            throw std::invalid_argument("network: weight " + std::to_string(l + 1) +
                                        " has shape " + weights[l].shape_str() +
                                        ", expected " + std::to_string(layer_sizes[l + 1]) +
                                        "x" + std::to_string(layer_sizes[l]));
        }
        if (biases[l].rows() != layer_sizes[l + 1] || biases[l].cols() != 1) {
            throw std::invalid_argument("network: bias " + std::to_string(l + 1) +
                                        " has shape " + biases[l].shape_str());
        }
    }
}

NetworkParams NetworkParams::random_init(const std::vector<std::size_t>& sizes,
                                         std::uint64_t seed) {
    NetworkParams p;
    p.layer_sizes = sizes;
    auto rng = make_rng(seed, "net-init");
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        RealMatrix w(sizes[l + 1], sizes[l]);
        // Xavier scaling keeps the sigmoid output layer out of saturation.
        const double stddev = std::sqrt(1.0 / static_cast<double>(sizes[l]));
        for (double& e : w.entries()) e = normal_unit(rng) * stddev;
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(sizes[l + 1], 1, 0.0);
    }
    p.validate();
    return p;
}

namespace {

RealMatrix add_bias_columns(const RealMatrix& z, const RealMatrix& bias) {
    RealMatrix out = z;
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += bias(r, 0);
    return out;
}

RealMatrix row_sums(const RealMatrix& m) {
    RealMatrix out(m.rows(), 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) s += m(r, c);
        out(r, 0) = s;
    }
    return out;
}

}  // namespace

ForwardPass forward(const NetworkParams& params, const RealMatrix& x,
                    const NetSpec& spec) {
    params.validate();
    if (x.rows() != params.layer_sizes.front()) {
        throw std::invalid_argument("forward: input has " + std::to_string(x.rows()) +
                                    " rows, network expects " +
                                    std::to_string(params.layer_sizes.front()));
    }
    ForwardPass pass;
    pass.activations.push_back(x);
    for (std::size_t l = 0; l < params.depth(); ++l) {
        const Activation act = l + 1 == params.depth() ? spec.output : spec.hidden;
        RealMatrix tau =
            add_bias_columns(matmul(params.weights[l], pass.activations.back()),
                             params.biases[l]);
        pass.activations.push_back(activate(act, tau));
        pass.preacts.push_back(std::move(tau));
    }
    return pass;
}

double squared_error_loss(const RealMatrix& out, const RealMatrix& labels) {
    if (!out.same_shape(labels)) {
        throw std::invalid_argument("loss: output " + out.shape_str() + " vs labels " +
                                    labels.shape_str());
    }
    const double n = static_cast<double>(out.cols());
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double d = out.entries()[i] - labels.entries()[i];
        s += d * d;
    }
    return s / (2.0 * n);
}

double accuracy(const RealMatrix& out, const RealMatrix& labels) {
    if (!out.same_shape(labels)) {
        throw std::invalid_argument("accuracy: output " + out.shape_str() + " vs labels " +
                                    labels.shape_str());
    }
    std::size_t hits = 0;
    for (std::size_t c = 0; c < out.cols(); ++c) {
        if (out.rows() == 1) {
            hits += (out(0, c) > 0.5) == (labels(0, c) > 0.5);
        } else {
            std::size_t got = 0, want = 0;
            for (std::size_t r = 1; r < out.rows(); ++r) {
                if (out(r, c) > out(got, c)) got = r;
                if (labels(r, c) > labels(want, c)) want = r;
            }
            hits += got == want;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(out.cols());
}

RealMatrix coded_backprop_delta(const RealMatrix& theta_next,
                                const RealMatrix& delta_next, const RealMatrix& tau,
                                Activation act, CodedBackend& backend) {
    if (theta_next.rows() != delta_next.rows()) {
        throw std::invalid_argument("coded_backprop_delta: theta " + theta_next.shape_str() +
                                    " vs delta " + delta_next.shape_str());
    }
    if (theta_next.cols() != tau.rows() || delta_next.cols() != tau.cols()) {
        throw std::invalid_argument("coded_backprop_delta: tau " + tau.shape_str() +
                                    " does not conform");
    }
    TaskSpec spec;
    spec.fn = TaskFn::BackpropDelta;
    spec.input = transpose(theta_next);  // rows of theta^T are partitioned
    spec.broadcast = delta_next;
    spec.codec = backend.codec;
    spec.wait = backend.wait;
    spec.curve = backend.curve;
    spec.mask_scale = backend.mask_scale;
    spec.scale_bits = backend.scale_bits;
    spec.encrypt = backend.encrypt;
    spec.jitter_ms = backend.jitter_ms;

    JobResult job =
        run_job(spec, backend.profiles, mix_seed(backend.seed, "dl-job", backend.jobs_run));
    backend.jobs_run += 1;
    backend.virtual_ms += job.report.wall_clock_ms;

    const RealMatrix product = take_rows(vstack(job.outputs), theta_next.cols());
    return hadamard(product, activate_deriv(act, tau));
}

void sgd_step(NetworkParams& params, const RealMatrix& x_batch,
              const RealMatrix& y_batch, double lr, const NetSpec& spec,
              CodedBackend& backend) {
    const ForwardPass pass = forward(params, x_batch, spec);
    const std::size_t depth = params.depth();
    const double batch = static_cast<double>(x_batch.cols());

    // Output-layer delta of the mean squared-error loss; the batch sum in the
    // update is realized by the matrix product against the activations.
    std::vector<RealMatrix> deltas(depth);
    deltas[depth - 1] =
        scale(hadamard(sub(pass.activations[depth], y_batch),
                       activate_deriv(spec.output, pass.preacts[depth - 1])),
              1.0 / batch);
    for (std::size_t l = depth - 1; l-- > 0;) {
        deltas[l] = coded_backprop_delta(params.weights[l + 1], deltas[l + 1],
                                         pass.preacts[l], spec.hidden, backend);
    }

    for (std::size_t l = 0; l < depth; ++l) {
        params.weights[l] =
            sub(params.weights[l],
                scale(matmul(deltas[l], transpose(pass.activations[l])), lr));
        params.biases[l] = sub(params.biases[l], scale(row_sums(deltas[l]), lr));
    }
}

namespace {

RealMatrix select_columns(const RealMatrix& m, const std::vector<std::size_t>& idx,
                          std::size_t begin, std::size_t end) {
    RealMatrix out(m.rows(), end - begin);
    for (std::size_t c = begin; c < end; ++c)
        for (std::size_t r = 0; r < m.rows(); ++r) out(r, c - begin) = m(r, idx[c]);
    return out;
}

}  // namespace

TrainResult train(const Dataset& train_set, const Dataset* test_set,
                  const TrainConfig& config) {
    if (train_set.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (config.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (config.lr <= 0.0) throw std::invalid_argument("train: learning rate must be > 0");
    if (config.layers.size() < 2 || config.layers.front() != train_set.x.rows() ||
        config.layers.back() != train_set.y.rows()) {
        throw std::invalid_argument("train: layer sizes do not match dataset shapes");
    }

    CodedBackend backend;
    backend.curve = secp256k1_curve();
    backend.profiles =
        make_profiles(config.n, backend.curve, mix_seed(config.seed, "train-keys"),
                      config.stragglers, config.colluders, config.base_delay_ms,
                      config.straggler_extra_ms);
    backend.codec = default_anchors(config.n, config.k, config.t);
    backend.wait = config.algo == TrainAlgo::Conv
                       ? WaitPolicy::all()
                       : WaitPolicy::first_r(config.n - config.stragglers.size());
    backend.mask_scale = config.mask_scale;
    backend.scale_bits = config.scale_bits;
    backend.encrypt = config.encrypt;
    backend.jitter_ms = config.jitter_ms;
    backend.seed = mix_seed(config.seed, "train-backend");

    TrainResult result;
    result.params = NetworkParams::random_init(config.layers, mix_seed(config.seed, "init"));

    const std::size_t m = train_set.size();
    const std::size_t batch = std::max<std::size_t>(1, std::min(config.batch, m));
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});

    const Dataset& eval_set =
        (test_set != nullptr && test_set->size() > 0) ? *test_set : train_set;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        auto rng = make_rng(config.seed, "epoch-shuffle", epoch);
        for (std::size_t i = m; i-- > 1;) {  // Fisher-Yates on uniform_unit draws
            const auto j = static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(i + 1));
            std::swap(order[i], order[std::min(j, i)]);
        }
        const double epoch_start_ms = backend.virtual_ms;
        for (std::size_t at = 0; at < m; at += batch) {
            const std::size_t end = std::min(at + batch, m);
            const RealMatrix xb = select_columns(train_set.x, order, at, end);
            const RealMatrix yb = select_columns(train_set.y, order, at, end);
            sgd_step(result.params, xb, yb, config.lr, config.act, backend);
        }
        const ForwardPass full = forward(result.params, train_set.x, config.act);
        result.trace.loss.push_back(
            squared_error_loss(full.activations.back(), train_set.y));
        const ForwardPass eval = forward(result.params, eval_set.x, config.act);
        result.trace.accuracy.push_back(accuracy(eval.activations.back(), eval_set.y));
        result.trace.epoch_ms.push_back(backend.virtual_ms - epoch_start_ms);
    }
    return result;
}

}  // namespace spacdc
