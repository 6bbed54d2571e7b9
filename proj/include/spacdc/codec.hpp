#ifndef SPACDC_CODEC_HPP
#define SPACDC_CODEC_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spacdc/matrix.hpp"

namespace spacdc {

/// Radius around a node inside which the rational combination is replaced by
/// the exact nodal value (the quotient has a removable singularity there).
inline constexpr double kNodeGuard = 1e-9;

/// Minimum distance default_anchors enforces between any alpha and any beta.
inline constexpr double kMinAnchorSeparation = 1e-6;

/// Public description of the code: worker count n, data blocks k, colluder
/// tolerance t, the k+t anchor points beta (where the encoder reproduces
/// blocks and masks) and the n evaluation points alpha (one per worker).
struct CodecConfig {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t t = 0;
    std::vector<double> beta;
    std::vector<double> alpha;

    void validate() const;
};

/// count Chebyshev points of the first kind on [-1, 1], largest first,
/// optionally rotated by phase. Built from sin so symmetric nodes negate
/// exactly and an odd center node is exactly zero.
std::vector<double> chebyshev_nodes(std::size_t count, double phase = 0.0);

/// Chebyshev beta anchors plus phase-shifted Chebyshev alpha points with
/// pairwise separation above kMinAnchorSeparation. Deterministic.
CodecConfig default_anchors(std::size_t n, std::size_t k, std::size_t t);

/// Barycentric weights with alternating sign keyed to each node's global
/// index: w_i(z) = ((-1)^gi / (z - node_i)) / sum_j ((-1)^gj / (z - node_j)).
/// Within kNodeGuard of a node the weight vector collapses to that node's
/// indicator.
std::vector<double> berrut_weights(const std::vector<double>& nodes,
                                   const std::vector<std::size_t>& global_index,
                                   double z);

struct EncodedShare {
    std::size_t worker_index = 0;
    RealMatrix payload;
};

struct ReturnedResult {
    std::size_t worker_index = 0;
    RealMatrix payload;
};

/// t random mask matrices with entries i.i.d. uniform on
/// [-mask_scale, mask_scale], deterministic in the seed.
std::vector<RealMatrix> gen_masks(std::size_t t, std::size_t rows, std::size_t cols,
                                  double mask_scale, std::uint64_t seed);

/// The encoder u(z): alternating-sign barycentric rational combination of the
/// k data blocks and t masks over the beta anchors. u(beta_j) equals block j
/// (or mask j-k for j >= k).
RealMatrix encode_at(const std::vector<RealMatrix>& blocks,
                     const std::vector<RealMatrix>& masks, const CodecConfig& cfg,
                     double z);

/// Shares u(alpha_i) for every worker i in [0, n).
std::vector<EncodedShare> encode(const std::vector<RealMatrix>& blocks,
                                 const std::vector<RealMatrix>& masks,
                                 const CodecConfig& cfg);

/// Decoder h(z) over the returned subset, signs keyed to the returning
/// workers' global indices. Works for any nonempty subset; there is no
/// recovery threshold. Summation order is canonicalized by worker index, so
/// arrival order cannot change the result.
std::vector<RealMatrix> decode(const std::vector<ReturnedResult>& results,
                               const CodecConfig& cfg,
                               const std::vector<double>& targets);

/// decode at the k data anchors beta_0..beta_{k-1}.
std::vector<RealMatrix> recover(const std::vector<ReturnedResult>& results,
                                const CodecConfig& cfg);

}  // namespace spacdc

#endif
