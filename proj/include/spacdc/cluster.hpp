#ifndef SPACDC_CLUSTER_HPP
#define SPACDC_CLUSTER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spacdc/codec.hpp"
#include "spacdc/ecc.hpp"
#include "spacdc/matrix.hpp"

namespace spacdc {

struct WorkerProfile {
    std::size_t index = 0;
    KeyPair keypair;
    double base_delay_ms = 1.0;
    bool straggler = false;
    double straggler_extra_ms = 0.0;
    bool colluder = false;
};

/// Trusted-setup helper: n workers with per-index keypairs derived from the
/// seed, flags set from the straggler/colluder index lists.
std::vector<WorkerProfile> make_profiles(std::size_t n, const CurveParams& curve,
                                         std::uint64_t seed,
                                         const std::vector<std::size_t>& stragglers = {},
                                         const std::vector<std::size_t>& colluders = {},
                                         double base_delay_ms = 1.0,
                                         double straggler_extra_ms = 10.0);

/// How long the master waits before decoding: everyone, the r fastest, or a
/// virtual-time deadline.
struct WaitPolicy {
    enum class Kind { All, FirstR, Deadline };
    Kind kind = Kind::All;
    std::size_t r = 0;
    double deadline_ms = 0.0;

    static WaitPolicy all() { return {}; }
    static WaitPolicy first_r(std::size_t r);
    static WaitPolicy deadline(double ms);
    /// "all" | "first_r:<r>" | "deadline:<ms>"
    static WaitPolicy parse(const std::string& text);
    std::string str() const;
};

/// Built-in task functions a worker can run over its decoded share.
enum class TaskFn { Identity, Gram, Square, BackpropDelta };

TaskFn parse_task(const std::string& name);
std::string task_name(TaskFn fn);

/// Applies fn to one block. broadcast is the shared right-hand operand for
/// BackpropDelta (block * broadcast) and ignored otherwise.
RealMatrix apply_task(TaskFn fn, const RealMatrix& block, const RealMatrix& broadcast);

struct TaskSpec {
    TaskFn fn = TaskFn::Identity;
    RealMatrix input;
    RealMatrix broadcast;  // only used by BackpropDelta
    CodecConfig codec;
    WaitPolicy wait;
    CurveParams curve;
    double mask_scale = 1.0;
    int scale_bits = 24;
    bool encrypt = true;
    double jitter_ms = 0.0;
    // Virtual time drives the reports either way; with real_sleep each worker
    // additionally sleeps out its sampled delay, for wall-clock benchmarks.
    bool real_sleep = false;
};

/// One ciphertext crossing the simulated master<->worker boundary.
struct WireMessage {
    enum class Dir { ToWorker, ToMaster };
    Dir dir = Dir::ToWorker;
    std::size_t worker = 0;
    std::string kind;  // "share", "broadcast", "result"
    CipherMatrix payload;
};

using WireTap = std::function<void(const WireMessage&)>;

struct ClusterReport {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string task;
    std::vector<std::size_t> returned_set;      // F, ascending worker index
    std::vector<double> per_worker_elapsed_ms;  // all n workers
    std::vector<double> decode_targets_error;   // rel. error at each data anchor
    double wall_clock_ms = 0.0;
    std::vector<std::size_t> stragglers;
    std::vector<std::size_t> colluders;
    std::vector<EncodedShare> colluder_views;  // plaintext shares the colluders saw
};

/// Completion time per worker: base (+ straggler extra) + uniform jitter.
std::vector<double> simulate_delays(const std::vector<WorkerProfile>& profiles,
                                    double jitter_ms, std::uint64_t seed);

struct JobResult {
    std::vector<RealMatrix> outputs;  // decoded block results, k of them
    ClusterReport report;
};

/// Runs the full three-phase job: partition+mask+encode, encrypt and
/// distribute, workers decrypt/compute/encrypt concurrently, master decrypts
/// and decodes whatever the wait policy admitted. Fully deterministic in
/// (spec, profiles, seed). The optional tap sees every ciphertext on the
/// wire (encrypted runs only).
JobResult run_job(const TaskSpec& spec, const std::vector<WorkerProfile>& profiles,
                  std::uint64_t seed, const WireTap& tap = {});

struct AuditOptions {
    std::size_t trials = 10000;
    double significance = 0.01;
    double mask_scale = 0.0;  // 0 = 1e3 * ||X||_inf
    std::uint64_t seed = 1;
};

struct AuditRecord {
    std::size_t colluder_count = 0;
    std::size_t t = 0;
    bool bound_exceeded = false;  // more pooled views than the code tolerates
    double ks_stat = 0.0;
    double ks_critical = 0.0;
    std::size_t trials = 0;
    std::size_t samples_per_side = 0;
    bool pass = false;
};

/// Re-runs the encoding many times with fresh masks and applies the
/// two-sample KS criterion to the colluders' share entries, produced from x
/// and from a fixed distinct input (its negation). More colluders than t is
/// reported as bound_exceeded, not thrown.
AuditRecord collusion_audit(const ClusterReport& report, const RealMatrix& x,
                            const CodecConfig& cfg, const AuditOptions& opts = {});

}  // namespace spacdc

#endif
