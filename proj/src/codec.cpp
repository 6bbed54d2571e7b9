#include "spacdc/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spacdc/errors.hpp"
#include "spacdc/rng.hpp"

namespace spacdc {

namespace {

constexpr double kPi = 3.141592653589793238462643;

bool all_distinct(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] == v[j]) return false;
    return true;
}

double min_separation(const std::vector<double>& a, const std::vector<double>& b) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : a)
        for (double y : b) m = std::min(m, std::abs(x - y));
    return m;
}

}  // namespace

void CodecConfig::validate() const {
    if (k < 1) throw ConfigError("codec: k must be >= 1");
    if (n < 1) throw ConfigError("codec: n must be >= 1");
    if (beta.size() != k + t) {
        throw ConfigError("codec: expected " + std::to_string(k + t) + " beta anchors, got " +
                          std::to_string(beta.size()));
    }
    if (alpha.size() != n) {
        throw ConfigError("codec: expected " + std::to_string(n) + " alpha points, got " +
                          std::to_string(alpha.size()));
    }
    if (!all_distinct(beta)) throw ConfigError("codec: beta anchors must be distinct");
    if (!all_distinct(alpha)) throw ConfigError("codec: alpha points must be distinct");
    for (double a : alpha) {
        for (double b : beta) {
            if (a == b) {
                throw ConfigError("codec: alpha " + std::to_string(a) +
                                  " collides with a beta anchor");
            }
        }
    }
}

std::vector<double> chebyshev_nodes(std::size_t count, double phase) {
    std::vector<double> nodes(count);
    for (std::size_t j = 0; j < count; ++j) {
        // cos((2j+1)pi/(2count) + phase) written through sin for exact symmetry.
        const double numer = static_cast<double>(count) - 1.0 - 2.0 * static_cast<double>(j);
        nodes[j] = std::sin(numer * kPi / (2.0 * static_cast<double>(count)) - phase);
    }
    return nodes;
}

CodecConfig default_anchors(std::size_t n, std::size_t k, std::size_t t) {
    if (k < 1 || n < 1) throw ConfigError("default_anchors: need n >= 1 and k >= 1");
    CodecConfig cfg;
    cfg.n = n;
    cfg.k = k;
    cfg.t = t;
    cfg.beta = chebyshev_nodes(k + t);
    // Rotating the alpha grid off the beta grid; the base step is half the
    // angular unit on which exact collisions can occur.
    const double step = kPi / (4.0 * static_cast<double>(n) * static_cast<double>(k + t));
    for (int attempt = 1; attempt <= 64; ++attempt) {
        cfg.alpha = chebyshev_nodes(n, step * attempt);
        if (all_distinct(cfg.alpha) &&
            min_separation(cfg.alpha, cfg.beta) > kMinAnchorSeparation) {
            cfg.validate();
            return cfg;
        }
    }
    throw ConfigError("default_anchors: cannot separate alpha from beta for n=" +
                      std::to_string(n) + ", k+t=" + std::to_string(k + t));
}

std::vector<double> berrut_weights(const std::vector<double>& nodes,
                                   const std::vector<std::size_t>& global_index,
                                   double z) {
    if (nodes.empty()) throw std::invalid_argument("berrut_weights: no nodes");
    if (nodes.size() != global_index.size()) {
        throw std::invalid_argument("berrut_weights: nodes/index size mismatch");
    }
    std::vector<double> w(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(z - nodes[i]) < kNodeGuard) {
            w[i] = 1.0;  // exact pass-through at (or next to) the node
            return w;
        }
    }
    double denom = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double sign = (global_index[i] % 2 == 0) ? 1.0 : -1.0;
        w[i] = sign / (z - nodes[i]);
        denom += w[i];
    }
    for (double& wi : w) wi /= denom;
    return w;
}

std::vector<RealMatrix> gen_masks(std::size_t t, std::size_t rows, std::size_t cols,
                                  double mask_scale, std::uint64_t seed) {
    auto rng = make_rng(seed, "codec-masks");
    std::vector<RealMatrix> masks;
    masks.reserve(t);
    for (std::size_t i = 0; i < t; ++i) {
        RealMatrix m(rows, cols);
        for (double& e : m.entries()) e = uniform_symmetric(rng, mask_scale);
        masks.push_back(std::move(m));
    }
    return masks;
}

namespace {

void check_encode_inputs(const std::vector<RealMatrix>& blocks,
                         const std::vector<RealMatrix>& masks, const CodecConfig& cfg) {
    cfg.validate();
    if (blocks.size() != cfg.k) {
        throw std::invalid_argument("encode: expected " + std::to_string(cfg.k) +
                                    " blocks, got " + std::to_string(blocks.size()));
    }
    if (masks.size() != cfg.t) {
        throw std::invalid_argument("encode: expected " + std::to_string(cfg.t) +
                                    " masks, got " + std::to_string(masks.size()));
    }
    for (const auto& b : blocks) {
        if (!b.same_shape(blocks.front())) {
            throw std::invalid_argument("encode: block shape mismatch (" +
                                        blocks.front().shape_str() + " vs " + b.shape_str() +
                                        ")");
        }
    }
    for (const auto& m : masks) {
        if (!m.same_shape(blocks.front())) {
            throw std::invalid_argument("encode: mask shape mismatch (" +
                                        blocks.front().shape_str() + " vs " + m.shape_str() +
                                        ")");
        }
    }
}

}  // namespace

namespace {

RealMatrix encode_at_checked(const std::vector<RealMatrix>& blocks,
                             const std::vector<RealMatrix>& masks, const CodecConfig& cfg,
                             double z) {
    std::vector<std::size_t> index(cfg.beta.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    const std::vector<double> w = berrut_weights(cfg.beta, index, z);

    RealMatrix out(blocks.front().rows(), blocks.front().cols());
    for (std::size_t j = 0; j < cfg.beta.size(); ++j) {
        if (w[j] == 0.0) continue;
        const RealMatrix& source = j < cfg.k ? blocks[j] : masks[j - cfg.k];
        for (std::size_t i = 0; i < out.size(); ++i) {
            out.entries()[i] += w[j] * source.entries()[i];
        }
    }
    return out;
}

}  // namespace

RealMatrix encode_at(const std::vector<RealMatrix>& blocks,
                     const std::vector<RealMatrix>& masks, const CodecConfig& cfg,
                     double z) {
    check_encode_inputs(blocks, masks, cfg);
    return encode_at_checked(blocks, masks, cfg, z);
}

std::vector<EncodedShare> encode(const std::vector<RealMatrix>& blocks,
                                 const std::vector<RealMatrix>& masks,
                                 const CodecConfig& cfg) {
    check_encode_inputs(blocks, masks, cfg);
    std::vector<EncodedShare> shares;
    shares.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        shares.push_back({i, encode_at_checked(blocks, masks, cfg, cfg.alpha[i])});
    }
    return shares;
}

std::vector<RealMatrix> decode(const std::vector<ReturnedResult>& results,
                               const CodecConfig& cfg,
                               const std::vector<double>& targets) {
    cfg.validate();
    if (results.empty()) {
        throw InsufficientDataError("decode: no returned results");
    }
    std::vector<const ReturnedResult*> ordered;
    ordered.reserve(results.size());
    for (const auto& r : results) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(),
              [](const ReturnedResult* a, const ReturnedResult* b) {
                  return a->worker_index < b->worker_index;
              });

    std::vector<double> nodes;
    std::vector<std::size_t> index;
    nodes.reserve(ordered.size());
    index.reserve(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const std::size_t wi = ordered[i]->worker_index;
        if (wi >= cfg.n) {
            throw std::invalid_argument("decode: worker index " + std::to_string(wi) +
                                        " out of range for n=" + std::to_string(cfg.n));
        }
        if (i > 0 && index.back() == wi) {
            throw std::invalid_argument("decode: duplicate worker index " +
                                        std::to_string(wi));
        }
        if (!ordered[i]->payload.same_shape(ordered.front()->payload)) {
            throw std::invalid_argument("decode: result shape mismatch (" +
                                        ordered.front()->payload.shape_str() + " vs " +
                                        ordered[i]->payload.shape_str() + ")");
        }
        nodes.push_back(cfg.alpha[wi]);
        index.push_back(wi);
    }

    std::vector<RealMatrix> out;
    out.reserve(targets.size());
    for (double z : targets) {
        const std::vector<double> w = berrut_weights(nodes, index, z);
        RealMatrix acc(ordered.front()->payload.rows(), ordered.front()->payload.cols());
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            if (w[i] == 0.0) continue;
            const auto& payload = ordered[i]->payload.entries();
            for (std::size_t e = 0; e < acc.size(); ++e) {
                acc.entries()[e] += w[i] * payload[e];
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<RealMatrix> recover(const std::vector<ReturnedResult>& results,
                                const CodecConfig& cfg) {
    cfg.validate();
    const std::vector<double> targets(cfg.beta.begin(), cfg.beta.begin() + cfg.k);
    return decode(results, cfg, targets);
}

}  // namespace spacdc
