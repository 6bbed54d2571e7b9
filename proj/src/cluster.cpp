#include "spacdc/cluster.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "spacdc/errors.hpp"
#include "spacdc/rng.hpp"
#include "spacdc/stats.hpp"

namespace spacdc {

std::vector<WorkerProfile> make_profiles(std::size_t n, const CurveParams& curve,
                                         std::uint64_t seed,
                                         const std::vector<std::size_t>& stragglers,
                                         const std::vector<std::size_t>& colluders,
                                         double base_delay_ms,
                                         double straggler_extra_ms) {
    for (std::size_t idx : stragglers) {
        if (idx >= n) throw std::invalid_argument("make_profiles: straggler index out of range");
    }
    for (std::size_t idx : colluders) {
        if (idx >= n) throw std::invalid_argument("make_profiles: colluder index out of range");
    }
    std::vector<WorkerProfile> profiles(n);
    for (std::size_t i = 0; i < n; ++i) {
        profiles[i].index = i;
        profiles[i].keypair = keygen(curve, mix_seed(seed, "worker-key", i));
        profiles[i].base_delay_ms = base_delay_ms;
        profiles[i].straggler =
            std::find(stragglers.begin(), stragglers.end(), i) != stragglers.end();
        profiles[i].straggler_extra_ms = profiles[i].straggler ? straggler_extra_ms : 0.0;
        profiles[i].colluder =
            std::find(colluders.begin(), colluders.end(), i) != colluders.end();
    }
    return profiles;
}

WaitPolicy WaitPolicy::first_r(std::size_t r) {
    WaitPolicy p;
    p.kind = Kind::FirstR;
    p.r = r;
    return p;
}

WaitPolicy WaitPolicy::deadline(double ms) {
    WaitPolicy p;
    p.kind = Kind::Deadline;
    p.deadline_ms = ms;
    return p;
}

WaitPolicy WaitPolicy::parse(const std::string& text) {
    if (text == "all") return all();
    if (text.rfind("first_r:", 0) == 0) {
        const std::string arg = text.substr(8);
        try {
            return first_r(std::stoull(arg));
        } catch (const std::exception&) {
            throw ConfigError("wait_policy: bad first_r count '" + arg + "'");
        }
    }
    if (text.rfind("deadline:", 0) == 0) {
        const std::string arg = text.substr(9);
        try {
            return deadline(std::stod(arg));
        } catch (const std::exception&) {
            throw ConfigError("wait_policy: bad deadline '" + arg + "'");
        }
    }
    throw ConfigError("wait_policy: expected all | first_r:<r> | deadline:<ms>, got '" +
                      text + "'");
}

std::string WaitPolicy::str() const {
    switch (kind) {
        case Kind::All: return "all";
        case Kind::FirstR: return "first_r:" + std::to_string(r);
        case Kind::Deadline: return "deadline:" + std::to_string(deadline_ms);
    }
    return "?";
}

TaskFn parse_task(const std::string& name) {
    if (name == "identity") return TaskFn::Identity;
    if (name == "gram") return TaskFn::Gram;
    if (name == "square") return TaskFn::Square;
    if (name == "backprop_delta") return TaskFn::BackpropDelta;
    throw ConfigError("task: expected identity | gram | square | backprop_delta, got '" +
                      name + "'");
}

std::string task_name(TaskFn fn) {
    switch (fn) {
        case TaskFn::Identity: return "identity";
        case TaskFn::Gram: return "gram";
        case TaskFn::Square: return "square";
        case TaskFn::BackpropDelta: return "backprop_delta";
    }
    return "?";
}

RealMatrix apply_task(TaskFn fn, const RealMatrix& block, const RealMatrix& broadcast) {
    switch (fn) {
        case TaskFn::Identity: return block;
        case TaskFn::Gram: return matmul(block, transpose(block));
        case TaskFn::Square: return hadamard(block, block);
        case TaskFn::BackpropDelta: return matmul(block, broadcast);
    }
    throw std::invalid_argument("apply_task: unknown task");
}

std::vector<double> simulate_delays(const std::vector<WorkerProfile>& profiles,
                                    double jitter_ms, std::uint64_t seed) {
    std::vector<double> completion(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        auto rng = make_rng(seed, "delay", profiles[i].index);
        double t = profiles[i].base_delay_ms;
        if (profiles[i].straggler) t += profiles[i].straggler_extra_ms;
        if (jitter_ms > 0.0) t += uniform_unit(rng) * jitter_ms;
        completion[i] = t;
    }
    return completion;
}

namespace {

// Worker indices admitted by the policy, ascending by index.
std::vector<std::size_t> returned_under_policy(const std::vector<double>& completion,
                                               const WaitPolicy& wait) {
    const std::size_t n = completion.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return completion[a] < completion[b];
    });

    std::vector<std::size_t> picked;
    switch (wait.kind) {
        case WaitPolicy::Kind::All:
            picked = order;
            break;
        case WaitPolicy::Kind::FirstR: {
            if (wait.r == 0 || wait.r > n) {
                throw ConfigError("wait_policy: first_r count " + std::to_string(wait.r) +
                                  " out of range for n=" + std::to_string(n));
            }
            picked.assign(order.begin(), order.begin() + wait.r);
            break;
        }
        case WaitPolicy::Kind::Deadline:
            for (std::size_t i : order) {
                if (completion[i] <= wait.deadline_ms) picked.push_back(i);
            }
            break;
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

struct WorkerOutput {
    RealMatrix result;          // plaintext f(share), master view after decrypt
    EncodedShare decoded_share; // what the worker itself saw (for colluder views)
};

}  // namespace

JobResult run_job(const TaskSpec& spec, const std::vector<WorkerProfile>& profiles,
                  std::uint64_t seed, const WireTap& tap) {
    spec.codec.validate();
    if (profiles.size() != spec.codec.n) {
        throw std::invalid_argument("run_job: " + std::to_string(profiles.size()) +
                                    " profiles for n=" + std::to_string(spec.codec.n));
    }
    if (spec.fn == TaskFn::BackpropDelta && spec.broadcast.empty()) {
        throw std::invalid_argument("run_job: backprop_delta needs a broadcast operand");
    }
    const std::size_t n = spec.codec.n;
    for (std::size_t i = 0; i < n; ++i) {
        if (profiles[i].index != i) {
            throw std::invalid_argument("run_job: profiles must be ordered by index");
        }
    }

    // Phase I: partition, mask, encode, then marshal each share through the
    // quantized wire (masked with MEA-ECC unless encryption is disabled).
    const std::vector<RealMatrix> blocks = partition_rows(spec.input, spec.codec.k);
    const std::vector<RealMatrix> masks =
        gen_masks(spec.codec.t, blocks.front().rows(), blocks.front().cols(),
                  spec.mask_scale, mix_seed(seed, "job-masks"));
    const std::vector<EncodedShare> shares = encode(blocks, masks, spec.codec);

    KeyPair master;
    if (spec.encrypt) master = keygen(spec.curve, mix_seed(seed, "master-key"));

    struct Inbox {
        QuantizedMatrix share;
        QuantizedMatrix broadcast;
    };
    QuantizedMatrix broadcast_q;
    if (spec.fn == TaskFn::BackpropDelta) {
        broadcast_q = quantize(spec.broadcast, spec.scale_bits);
    }
    std::vector<Inbox> inboxes(n);
    for (std::size_t i = 0; i < n; ++i) {
        QuantizedMatrix q = quantize(shares[i].payload, spec.scale_bits);
        QuantizedMatrix qb = broadcast_q;
        if (spec.encrypt) {
            auto rng = make_rng(seed, "eph-to-worker", i);
            const CipherMatrix c =
                mea_encrypt(q, profiles[i].keypair.pk, random_ephemeral(rng, spec.curve),
                            spec.curve);
            if (tap) tap({WireMessage::Dir::ToWorker, i, "share", c});
            inboxes[i].share = mea_decrypt(c, profiles[i].keypair.sk, spec.curve);
            if (spec.fn == TaskFn::BackpropDelta) {
                const CipherMatrix cb =
                    mea_encrypt(qb, profiles[i].keypair.pk,
                                random_ephemeral(rng, spec.curve), spec.curve);
                if (tap) tap({WireMessage::Dir::ToWorker, i, "broadcast", cb});
                inboxes[i].broadcast = mea_decrypt(cb, profiles[i].keypair.sk, spec.curve);
            }
        } else {
            inboxes[i].share = std::move(q);
            inboxes[i].broadcast = std::move(qb);
        }
    }

    // Phase II: workers decode their inbox and compute concurrently. Ephemeral
    // scalars for the return leg are drawn up front so thread scheduling
    // cannot perturb the streams.
    std::vector<BigInt> return_ephemerals(n);
    if (spec.encrypt) {
        for (std::size_t i = 0; i < n; ++i) {
            auto rng = make_rng(seed, "eph-to-master", i);
            return_ephemerals[i] = random_ephemeral(rng, spec.curve);
        }
    }

    const std::vector<double> completion = simulate_delays(profiles, spec.jitter_ms, seed);

    std::vector<WorkerOutput> outputs(n);
    std::vector<CipherMatrix> return_cipher(n);
    const auto worker_body = [&](std::size_t i) {
        if (spec.real_sleep) {
            std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(completion[i]));
        }
        const RealMatrix share = dequantize(inboxes[i].share);
        if (!shares[i].payload.same_shape(share)) {
            throw ProtocolError("worker " + std::to_string(i) + ": decrypted share shape " +
                                share.shape_str() + " does not match job shape " +
                                shares[i].payload.shape_str());
        }
        outputs[i].decoded_share = {i, share};
        const RealMatrix result =
            apply_task(spec.fn, share, dequantize(inboxes[i].broadcast));
        const QuantizedMatrix q = quantize(result, spec.scale_bits);
        if (spec.encrypt) {
            return_cipher[i] = mea_encrypt(q, master.pk, return_ephemerals[i], spec.curve);
        } else {
            outputs[i].result = dequantize(q);
        }
    };
    // One lane per worker in real-sleep mode so the delays overlap the way
    // parallel workers would; otherwise a bounded pool.
    const std::size_t pool =
        spec.real_sleep
            ? n
            : std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> lanes;
    lanes.reserve(pool);
    for (std::size_t lane = 0; lane < pool; ++lane) {
        lanes.push_back(std::async(std::launch::async, [&, lane] {
            for (std::size_t i = lane; i < n; i += pool) worker_body(i);
        }));
    }
    for (auto& lane : lanes) lane.get();

    for (std::size_t i = 0; i < n; ++i) {
        if (spec.encrypt) {
            if (tap) tap({WireMessage::Dir::ToMaster, i, "result", return_cipher[i]});
            outputs[i].result =
                dequantize(mea_decrypt(return_cipher[i], master.sk, spec.curve));
        }
        if (!outputs[i].result.same_shape(outputs[0].result)) {
            throw ProtocolError("worker " + std::to_string(i) + ": decrypted result shape " +
                                outputs[i].result.shape_str() + " does not match " +
                                outputs[0].result.shape_str());
        }
    }

    // Phase III: virtual completion times pick the returned set, then the
    // master decodes from whatever came back.
    ClusterReport report;
    report.n = n;
    report.seed = seed;
    report.task = task_name(spec.fn);
    report.per_worker_elapsed_ms = completion;
    report.returned_set = returned_under_policy(completion, spec.wait);
    if (report.returned_set.empty()) {
        throw JobFailedError("run_job: wait policy '" + spec.wait.str() +
                             "' admitted no results");
    }
    for (const auto& p : profiles) {
        if (p.straggler) report.stragglers.push_back(p.index);
        if (p.colluder) {
            report.colluders.push_back(p.index);
            report.colluder_views.push_back(outputs[p.index].decoded_share);
        }
    }

    std::vector<ReturnedResult> returned;
    returned.reserve(report.returned_set.size());
    double wall = 0.0;
    for (std::size_t i : report.returned_set) {
        returned.push_back({i, outputs[i].result});
        wall = std::max(wall, completion[i]);
    }
    report.wall_clock_ms = wall;

    JobResult job;
    job.outputs = recover(returned, spec.codec);
    report.decode_targets_error.reserve(spec.codec.k);
    for (std::size_t j = 0; j < spec.codec.k; ++j) {
        const RealMatrix truth = apply_task(spec.fn, blocks[j], spec.broadcast);
        report.decode_targets_error.push_back(rel_error(job.outputs[j], truth));
    }
    job.report = std::move(report);
    return job;
}

AuditRecord collusion_audit(const ClusterReport& report, const RealMatrix& x,
                            const CodecConfig& cfg, const AuditOptions& opts) {
    AuditRecord rec;
    rec.t = cfg.t;
    rec.colluder_count = report.colluders.size();
    rec.trials = opts.trials;
    if (rec.colluder_count > cfg.t) {
        rec.bound_exceeded = true;  // pooled views outside the design tolerance
        rec.pass = false;
        return rec;
    }
    if (rec.colluder_count == 0) {
        rec.pass = true;  // nothing was observed
        return rec;
    }

    const double mask_scale =
        opts.mask_scale > 0.0 ? opts.mask_scale : 1e3 * inf_norm(x);
    const std::vector<RealMatrix> blocks = partition_rows(x, cfg.k);
    const std::vector<RealMatrix> blocks_alt = partition_rows(scale(x, -1.0), cfg.k);
    const std::size_t rows = blocks.front().rows();
    const std::size_t cols = blocks.front().cols();

    std::vector<double> sample_a, sample_b;
    sample_a.reserve(opts.trials * rec.colluder_count);
    sample_b.reserve(opts.trials * rec.colluder_count);
    for (std::size_t trial = 0; trial < opts.trials; ++trial) {
        const auto masks_a =
            gen_masks(cfg.t, rows, cols, mask_scale, mix_seed(opts.seed, "audit-a", trial));
        const auto masks_b =
            gen_masks(cfg.t, rows, cols, mask_scale, mix_seed(opts.seed, "audit-b", trial));
        for (std::size_t c : report.colluders) {
            sample_a.push_back(encode_at(blocks, masks_a, cfg, cfg.alpha[c])(0, 0));
            sample_b.push_back(encode_at(blocks_alt, masks_b, cfg, cfg.alpha[c])(0, 0));
        }
    }
    rec.samples_per_side = sample_a.size();
    rec.ks_stat = ks_statistic(sample_a, sample_b);
    rec.ks_critical = ks_critical(sample_a.size(), sample_b.size(), opts.significance);
    rec.pass = rec.ks_stat <= rec.ks_critical;
    return rec;
}

}  // namespace spacdc
