#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <vector>

#include "spacdc/cluster.hpp"
#include "spacdc/errors.hpp"
#include "spacdc/rng.hpp"

using namespace spacdc;

namespace {

TaskSpec base_spec(std::size_t n, std::size_t k, std::size_t t, TaskFn fn,
                   const CurveParams& curve) {
    TaskSpec spec;
    spec.fn = fn;
    spec.input = random_matrix(8, 4, 42);
    spec.codec = default_anchors(n, k, t);
    spec.wait = WaitPolicy::all();
    spec.curve = curve;
    spec.mask_scale = 1.0;
    return spec;
}

bool reports_equal(const ClusterReport& a, const ClusterReport& b) {
    return a.returned_set == b.returned_set &&
           a.per_worker_elapsed_ms == b.per_worker_elapsed_ms &&
           a.decode_targets_error == b.decode_targets_error &&
           a.wall_clock_ms == b.wall_clock_ms && a.stragglers == b.stragglers &&
           a.colluders == b.colluders;
}

}  // namespace

TEST_CASE("simulate_delays without jitter is just the base delays") {
    const CurveParams curve = secp256k1_curve();
    auto profiles = make_profiles(4, curve, 1, {}, {}, 5.0, 50.0);
    const auto delays = simulate_delays(profiles, 0.0, 9);
    for (double d : delays) CHECK(d == 5.0);
}

TEST_CASE("a slow straggler finishes last") {
    const CurveParams curve = secp256k1_curve();
    auto profiles = make_profiles(4, curve, 1, {2}, {}, 5.0, 50.0);
    const auto delays = simulate_delays(profiles, 1.0, 9);
    for (std::size_t i = 0; i < 4; ++i) {
        if (i != 2) CHECK(delays[2] > delays[i]);
    }
}

TEST_CASE("jitter has the uniform mean") {
    const CurveParams curve = secp256k1_curve();
    std::vector<WorkerProfile> profiles(1);
    profiles[0].base_delay_ms = 0.0;
    const double jitter = 8.0;
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        profiles[0].index = static_cast<std::size_t>(i);  // fresh stream per draw
        sum += simulate_delays(profiles, jitter, 77)[0];
    }
    const double mean = sum / draws;
    CHECK(std::abs(mean - jitter / 2.0) < 0.01 * jitter);
}

TEST_CASE("identity job with no stragglers matches the plain codec error") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(6, 2, 1, TaskFn::Identity, curve);
    auto profiles = make_profiles(6, curve, 3);
    const JobResult job = run_job(spec, profiles, 1234);

    // Reference: same masks, no wire at all.
    const auto blocks = partition_rows(spec.input, 2);
    const auto masks = gen_masks(1, blocks[0].rows(), blocks[0].cols(), spec.mask_scale,
                                 mix_seed(1234, "job-masks"));
    const auto shares = encode(blocks, masks, spec.codec);
    std::vector<ReturnedResult> results;
    for (const auto& s : shares) results.push_back({s.worker_index, s.payload});
    const auto rec = recover(results, spec.codec);
    for (std::size_t j = 0; j < 2; ++j) {
        const double codec_err = rel_error(rec[j], blocks[j]);
        CHECK(job.report.decode_targets_error[j] ==
              doctest::Approx(codec_err).epsilon(1e-4));
        // The wire quantization adds at most ~2^-24 per entry.
        CHECK(std::abs(job.report.decode_targets_error[j] - codec_err) < 1e-5);
    }
}

TEST_CASE("worked scenario: 8 workers, one straggler, gram task") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(8, 2, 1, TaskFn::Gram, curve);
    spec.wait = WaitPolicy::first_r(7);
    auto profiles = make_profiles(8, curve, 5, {3}, {}, 2.0, 20.0);
    const JobResult job = run_job(spec, profiles, 99);
    CHECK(job.report.returned_set.size() == 7);
    // The straggler cannot be in the returned set.
    for (std::size_t i : job.report.returned_set) CHECK(i != 3);
    CHECK(job.outputs.size() == 2);
    CHECK(job.report.wall_clock_ms < 22.0);
}

TEST_CASE("same seed gives a bit-identical report and outputs") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(5, 2, 1, TaskFn::Square, curve);
    spec.jitter_ms = 3.0;
    auto profiles = make_profiles(5, curve, 7, {1}, {4}, 1.0, 9.0);
    const JobResult a = run_job(spec, profiles, 321);
    const JobResult b = run_job(spec, profiles, 321);
    CHECK(reports_equal(a.report, b.report));
    REQUIRE(a.outputs.size() == b.outputs.size());
    for (std::size_t j = 0; j < a.outputs.size(); ++j) CHECK(a.outputs[j] == b.outputs[j]);

    const JobResult c = run_job(spec, profiles, 322);
    CHECK_FALSE(reports_equal(a.report, c.report));
}

TEST_CASE("wire carries only ciphertexts and encryption is transparent") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(5, 2, 1, TaskFn::Identity, curve);
    auto profiles = make_profiles(5, curve, 11);

    std::vector<WireMessage> wire;
    const JobResult encrypted =
        run_job(spec, profiles, 777, [&](const WireMessage& m) { wire.push_back(m); });
    CHECK(wire.size() == 10);  // share out + result back per worker

    // No intercepted payload may equal a plaintext share, even after undoing
    // the fixed-point scaling.
    const auto blocks = partition_rows(spec.input, 2);
    const auto masks = gen_masks(1, blocks[0].rows(), blocks[0].cols(), spec.mask_scale,
                                 mix_seed(777, "job-masks"));
    const auto shares = encode(blocks, masks, spec.codec);
    for (const auto& msg : wire) {
        QuantizedMatrix as_plain;
        as_plain.rows = msg.payload.rows;
        as_plain.cols = msg.payload.cols;
        as_plain.scale_bits = msg.payload.scale_bits;
        for (const BigInt& e : msg.payload.entries) {
            as_plain.entries.push_back(mpz_get_si(e.get_mpz_t()));
        }
        const RealMatrix leaked = dequantize(as_plain);
        for (const auto& s : shares) {
            if (!s.payload.same_shape(leaked)) continue;
            CHECK(max_abs_diff(leaked, s.payload) > 0.0);
        }
    }

    TaskSpec plain = spec;
    plain.encrypt = false;
    std::size_t plain_wire_count = 0;
    const JobResult unencrypted = run_job(
        plain, profiles, 777, [&](const WireMessage&) { ++plain_wire_count; });
    CHECK(plain_wire_count == 0);
    REQUIRE(encrypted.outputs.size() == unencrypted.outputs.size());
    for (std::size_t j = 0; j < encrypted.outputs.size(); ++j) {
        CHECK(encrypted.outputs[j] == unencrypted.outputs[j]);  // bit-identical
    }
}

TEST_CASE("first_r completes without stragglers and beats wait-all") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(6, 2, 0, TaskFn::Identity, curve);
    spec.jitter_ms = 1.0;

    for (std::size_t s = 1; s <= 5; ++s) {
        std::vector<std::size_t> stragglers;
        for (std::size_t i = 0; i < s; ++i) stragglers.push_back(i);
        auto profiles = make_profiles(6, curve, 13, stragglers, {}, 2.0, 40.0);
        TaskSpec fast = spec;
        fast.wait = WaitPolicy::first_r(6 - s);
        const JobResult quick = run_job(fast, profiles, 55);
        CHECK(quick.report.returned_set.size() == 6 - s);
        for (std::size_t i : quick.report.returned_set) CHECK(i >= s);

        TaskSpec slow = spec;
        slow.wait = WaitPolicy::all();
        const JobResult waiting = run_job(slow, profiles, 55);
        CHECK(quick.report.wall_clock_ms < waiting.report.wall_clock_ms);
    }
}

TEST_CASE("deadline policy can fail the job") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(3, 1, 0, TaskFn::Identity, curve);
    spec.wait = WaitPolicy::deadline(0.5);
    auto profiles = make_profiles(3, curve, 17, {}, {}, 2.0, 0.0);
    CHECK_THROWS_AS(run_job(spec, profiles, 5), JobFailedError);
}

TEST_CASE("wait policy parsing") {
    CHECK(WaitPolicy::parse("all").kind == WaitPolicy::Kind::All);
    CHECK(WaitPolicy::parse("first_r:5").r == 5);
    CHECK(WaitPolicy::parse("deadline:12.5").deadline_ms == 12.5);
    CHECK_THROWS_AS(WaitPolicy::parse("sometimes"), ConfigError);
    CHECK_THROWS_AS(WaitPolicy::parse("first_r:x"), ConfigError);
}

TEST_CASE("collusion audit within and beyond the tolerance") {
    const CodecConfig cfg = default_anchors(8, 2, 1);
    const RealMatrix x = random_matrix(4, 4, 23);
    AuditOptions opts;
    opts.trials = 2000;
    opts.seed = 9;

    ClusterReport one;
    one.n = 8;
    one.colluders = {2};
    const AuditRecord ok = collusion_audit(one, x, cfg, opts);
    CHECK_FALSE(ok.bound_exceeded);
    CHECK(ok.pass);
    CHECK(ok.ks_stat <= ok.ks_critical);

    ClusterReport two;
    two.n = 8;
    two.colluders = {2, 5};
    const AuditRecord flagged = collusion_audit(two, x, cfg, opts);
    CHECK(flagged.bound_exceeded);
    CHECK_FALSE(flagged.pass);

    const CodecConfig no_masks = default_anchors(8, 2, 0);
    const AuditRecord zero_t = collusion_audit(one, x, no_masks, opts);
    CHECK(zero_t.bound_exceeded);
}

TEST_CASE("colluder views are the plaintext shares") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(4, 2, 1, TaskFn::Identity, curve);
    auto profiles = make_profiles(4, curve, 19, {}, {1, 3});
    const JobResult job = run_job(spec, profiles, 111);
    REQUIRE(job.report.colluder_views.size() == 2);
    CHECK(job.report.colluder_views[0].worker_index == 1);
    CHECK(job.report.colluder_views[1].worker_index == 3);

    const auto blocks = partition_rows(spec.input, 2);
    const auto masks = gen_masks(1, blocks[0].rows(), blocks[0].cols(), spec.mask_scale,
                                 mix_seed(111, "job-masks"));
    const auto shares = encode(blocks, masks, spec.codec);
    // Views equal the shares up to wire quantization.
    CHECK(max_abs_diff(job.report.colluder_views[0].payload, shares[1].payload) < 1e-6);
    CHECK(max_abs_diff(job.report.colluder_views[1].payload, shares[3].payload) < 1e-6);
}

TEST_CASE("real-sleep mode spends at least the simulated time") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(3, 1, 0, TaskFn::Identity, curve);
    spec.encrypt = false;
    spec.real_sleep = true;
    auto profiles = make_profiles(3, curve, 31, {}, {}, 20.0, 0.0);
    const auto begin = std::chrono::steady_clock::now();
    const JobResult job = run_job(spec, profiles, 71);
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin)
            .count();
    CHECK(elapsed_ms >= job.report.wall_clock_ms);
    CHECK(job.report.wall_clock_ms == 20.0);
}

TEST_CASE("wall clock covers the returned set") {
    const CurveParams curve = secp256k1_curve();
    TaskSpec spec = base_spec(5, 1, 0, TaskFn::Identity, curve);
    spec.jitter_ms = 2.0;
    spec.wait = WaitPolicy::first_r(3);
    auto profiles = make_profiles(5, curve, 29, {0}, {}, 1.0, 50.0);
    const JobResult job = run_job(spec, profiles, 61);
    double max_elapsed = 0.0;
    for (std::size_t i : job.report.returned_set) {
        max_elapsed = std::max(max_elapsed, job.report.per_worker_elapsed_ms[i]);
    }
    CHECK(job.report.wall_clock_ms == max_elapsed);
}
