#include "spacdc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "spacdc/cluster.hpp"
#include "spacdc/codec.hpp"
#include "spacdc/datasets.hpp"
#include "spacdc/dl.hpp"
#include "spacdc/ecc.hpp"
#include "spacdc/errors.hpp"
#include "spacdc/matrix.hpp"
#include "spacdc/rng.hpp"
#include "spacdc/stats.hpp"

namespace spacdc::cli {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "seed",
        "output.dir",
        "input.matrix",
        "input.rows",
        "input.cols",
        "codec.n",
        "codec.k",
        "codec.t",
        "codec.alpha",
        "codec.beta",
        "codec.mask_scale",
        "cluster.n",
        "cluster.stragglers",
        "cluster.colluders",
        "cluster.base_delay_ms",
        "cluster.straggler_delay_ms",
        "cluster.jitter_ms",
        "cluster.wait_policy",
        "cluster.task",
        "cluster.encrypt",
        "cluster.scale_bits",
        "cluster.real_sleep",
        "train.lr",
        "train.epochs",
        "train.batch",
        "train.layers",
        "train.dataset",
        "train.algo",
        "train.samples",
        "train.activation",
        "curve.profile",
        "curve.q",
        "curve.a",
        "curve.b",
        "curve.gx",
        "curve.gy",
        "curve.n",
        "audit.trials",
        "bench.sizes",
        "bench.rows",
        "bench.cols",
        "bench.reps",
        "bench.targets",
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (known_keys().count(key) == 0) {
        throw ConfigError("config: unknown key '" + key + "'");
    }
    kv_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ExperimentConfig::get_str(const std::string& key,
                                      const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string ExperimentConfig::require_str(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("config: missing required key '" + key + "'");
    return it->second;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key,
                                        std::uint64_t fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " = '" + it->second + "' is not an integer");
    }
}

double ExperimentConfig::get_f64(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " = '" + it->second + "' is not a number");
    }
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "1" || it->second == "true") return true;
    if (it->second == "0" || it->second == "false") return false;
    throw ConfigError("config: " + key + " = '" + it->second + "' is not a boolean");
}

std::vector<double> ExperimentConfig::get_f64_list(const std::string& key) const {
    std::vector<double> out;
    const auto it = kv_.find(key);
    if (it == kv_.end()) return out;
    for (const auto& item : split_list(it->second)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config: " + key + " has non-numeric element '" + item + "'");
        }
    }
    return out;
}

std::vector<std::size_t> ExperimentConfig::get_index_list(const std::string& key) const {
    std::vector<std::size_t> out;
    const auto it = kv_.find(key);
    if (it == kv_.end()) return out;
    for (const auto& item : split_list(it->second)) {
        try {
            out.push_back(std::stoull(item));
        } catch (const std::exception&) {
            throw ConfigError("config: " + key + " has non-integer element '" + item + "'");
        }
    }
    return out;
}

std::string ExperimentConfig::resolved_text() const {
    std::string text;
    for (const auto& [k, v] : kv_) {  // std::map iterates sorted
        text += k;
        text += '=';
        text += v;
        text += '\n';
    }
    return text;
}

std::string ExperimentConfig::config_hash() const {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(resolved_text());
    return out.str();
}

std::string ExperimentConfig::header_line() const {
    return "# config_hash=" + config_hash() + " seed=" + std::to_string(seed());
}

namespace {

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        }
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

std::string join_indices(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<std::size_t> sample_distinct(std::size_t count, std::size_t n,
                                         std::uint64_t seed, std::string_view stream) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    auto rng = make_rng(seed, stream);
    for (std::size_t i = n; i-- > 1;) {
        const auto j = static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(i + 1));
        std::swap(pool[i], pool[std::min(j, i)]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

// Experimental settings s1..s4: 30 workers, tolerance 3, stragglers 0/3/5/7.
void apply_scenario(ExperimentConfig& cfg, const std::string& scenario) {
    std::size_t stragglers = 0;
    if (scenario == "s1") stragglers = 0;
    else if (scenario == "s2") stragglers = 3;
    else if (scenario == "s3") stragglers = 5;
    else if (scenario == "s4") stragglers = 7;
    else throw ConfigError("scenario: expected s1|s2|s3|s4, got '" + scenario + "'");

    constexpr std::size_t n = 30;
    constexpr std::size_t t = 3;
    cfg.set("cluster.n", std::to_string(n));
    cfg.set("codec.n", std::to_string(n));
    cfg.set("codec.k", "4");
    cfg.set("codec.t", std::to_string(t));
    cfg.set("codec.mask_scale", "1000");
    cfg.set("cluster.task", "gram");
    cfg.set("cluster.base_delay_ms", "50");
    cfg.set("cluster.straggler_delay_ms", "500");
    cfg.set("cluster.jitter_ms", "10");
    cfg.set("cluster.wait_policy", "first_r:" + std::to_string(n - stragglers));
    cfg.set("cluster.stragglers",
            join_indices(sample_distinct(stragglers, n, cfg.seed(), "scenario-stragglers")));
    cfg.set("cluster.colluders",
            join_indices(sample_distinct(t, n, cfg.seed(), "scenario-colluders")));
}

}  // namespace

ExperimentConfig load_config(const std::string& path, const std::string& scenario,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
    ExperimentConfig cfg;
    if (!path.empty()) apply_config_file(cfg, path);
    // Seed and output overrides first: the scenario preset samples from the seed.
    for (const auto& [k, v] : overrides) {
        if (k == "seed" || k == "output.dir") cfg.set(k, v);
    }
    if (!scenario.empty()) apply_scenario(cfg, scenario);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    return cfg;
}

namespace {

CurveParams build_curve(const ExperimentConfig& cfg) {
    CurveParams curve;
    const std::string profile = cfg.get_str("curve.profile", "secp256k1");
    if (profile == "secp256k1") curve = secp256k1_curve();
    else if (profile == "toy") curve = toy_curve();
    else throw ConfigError("curve.profile: expected secp256k1 | toy, got '" + profile + "'");
    if (cfg.has("curve.q")) {
        try {
            curve.q = BigInt(cfg.require_str("curve.q"), 0);
            curve.a = BigInt(cfg.require_str("curve.a"), 0);
            curve.b = BigInt(cfg.require_str("curve.b"), 0);
            curve.g = CurvePoint::affine(BigInt(cfg.require_str("curve.gx"), 0),
                                         BigInt(cfg.require_str("curve.gy"), 0));
            curve.n = cfg.has("curve.n") ? BigInt(cfg.get_str("curve.n", "0"), 0) : BigInt(0);
        } catch (const std::invalid_argument&) {
            throw ConfigError("curve: q/a/b/gx/gy must be decimal or 0x-hex integers");
        }
    }
    curve.validate();
    return curve;
}

std::size_t worker_count(const ExperimentConfig& cfg) {
    const std::uint64_t codec_n = cfg.get_u64("codec.n", 0);
    const std::uint64_t cluster_n = cfg.get_u64("cluster.n", 0);
    if (codec_n && cluster_n && codec_n != cluster_n) {
        throw ConfigError("config: codec.n and cluster.n disagree");
    }
    const std::uint64_t n = codec_n ? codec_n : cluster_n;
    if (n == 0) throw ConfigError("config: set cluster.n (or codec.n)");
    return static_cast<std::size_t>(n);
}

CodecConfig build_codec(const ExperimentConfig& cfg) {
    const std::size_t n = worker_count(cfg);
    const auto k = static_cast<std::size_t>(cfg.get_u64("codec.k", 1));
    const auto t = static_cast<std::size_t>(cfg.get_u64("codec.t", 0));
    if (cfg.has("codec.alpha") != cfg.has("codec.beta")) {
        throw ConfigError("config: codec.alpha and codec.beta must be given together");
    }
    if (cfg.has("codec.alpha")) {
        CodecConfig codec;
        codec.n = n;
        codec.k = k;
        codec.t = t;
        codec.alpha = cfg.get_f64_list("codec.alpha");
        codec.beta = cfg.get_f64_list("codec.beta");
        codec.validate();
        return codec;
    }
    return default_anchors(n, k, t);
}

RealMatrix build_input(const ExperimentConfig& cfg) {
    if (cfg.has("input.matrix")) return load_matrix(cfg.require_str("input.matrix"));
    const auto rows = static_cast<std::size_t>(cfg.get_u64("input.rows", 32));
    const auto cols = static_cast<std::size_t>(cfg.get_u64("input.cols", 8));
    return random_matrix(rows, cols, mix_seed(cfg.seed(), "cli-input"));
}

// Every artifact starts with the hash+seed line; text artifacts also embed
// the fully-resolved configuration. Binary share files keep the one-line
// header so the ciphertext bytes start right after the first newline.
std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name,
                          bool binary = false) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir(), ec);
    if (ec) throw IoError("cannot create output dir " + cfg.out_dir());
    const std::string path = (fs::path(cfg.out_dir()) / name).string();
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot write " + path);
    out << cfg.header_line() << '\n';
    if (!binary) {
        for (const auto& [k, v] : cfg.entries()) out << "# cfg " << k << '=' << v << '\n';
    }
    return out;
}

struct ClusterSettings {
    std::vector<std::size_t> stragglers;
    std::vector<std::size_t> colluders;
    double base_delay_ms = 1.0;
    double straggler_extra_ms = 10.0;
    double jitter_ms = 0.0;
    int scale_bits = 24;
    bool encrypt = true;
    bool real_sleep = false;
};

ClusterSettings cluster_settings(const ExperimentConfig& cfg) {
    ClusterSettings s;
    s.stragglers = cfg.get_index_list("cluster.stragglers");
    s.colluders = cfg.get_index_list("cluster.colluders");
    s.base_delay_ms = cfg.get_f64("cluster.base_delay_ms", 1.0);
    s.straggler_extra_ms = cfg.get_f64("cluster.straggler_delay_ms", 10.0);
    s.jitter_ms = cfg.get_f64("cluster.jitter_ms", 0.0);
    s.scale_bits = static_cast<int>(cfg.get_u64("cluster.scale_bits", 24));
    s.encrypt = cfg.get_bool("cluster.encrypt", true);
    s.real_sleep = cfg.get_bool("cluster.real_sleep", false);
    return s;
}

WaitPolicy wait_policy(const ExperimentConfig& cfg, std::size_t n,
                       std::size_t straggler_count) {
    if (cfg.has("cluster.wait_policy")) {
        return WaitPolicy::parse(cfg.require_str("cluster.wait_policy"));
    }
    return WaitPolicy::first_r(n - std::min(n - 1, straggler_count));
}

}  // namespace

int cmd_encode(const ExperimentConfig& cfg) {
    if (!cfg.has("input.matrix")) {
        throw ConfigError("encode: input.matrix is required");
    }
    const RealMatrix x = build_input(cfg);
    const CodecConfig codec = build_codec(cfg);
    const CurveParams curve = build_curve(cfg);
    const ClusterSettings settings = cluster_settings(cfg);
    const double mask_scale = cfg.get_f64("codec.mask_scale", 1.0);

    const std::vector<RealMatrix> blocks = partition_rows(x, codec.k);
    const std::vector<RealMatrix> masks =
        gen_masks(codec.t, blocks.front().rows(), blocks.front().cols(), mask_scale,
                  mix_seed(cfg.seed(), "job-masks"));
    const std::vector<EncodedShare> shares = encode(blocks, masks, codec);
    const std::vector<WorkerProfile> profiles =
        make_profiles(codec.n, curve, mix_seed(cfg.seed(), "cluster-keys"));

    std::vector<std::string> files;
    for (std::size_t i = 0; i < codec.n; ++i) {
        const QuantizedMatrix q = quantize(shares[i].payload, settings.scale_bits);
        auto rng = make_rng(cfg.seed(), "eph-encode", i);
        const CipherMatrix c =
            mea_encrypt(q, profiles[i].keypair.pk, random_ephemeral(rng, curve), curve);
        const std::vector<std::uint8_t> bytes = serialize_cipher(c);
        const std::string name = "share_" + std::to_string(i) + ".bin";
        std::ofstream out = open_output(cfg, name, /*binary=*/true);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed: " + name);
        files.push_back(name);
    }

    std::ofstream manifest = open_output(cfg, "manifest.txt");
    manifest << "n=" << codec.n << "\nk=" << codec.k << "\nt=" << codec.t << '\n';
    manifest << std::setprecision(17);
    manifest << "beta=";
    for (std::size_t i = 0; i < codec.beta.size(); ++i)
        manifest << (i ? "," : "") << codec.beta[i];
    manifest << "\nalpha=";
    for (std::size_t i = 0; i < codec.alpha.size(); ++i)
        manifest << (i ? "," : "") << codec.alpha[i];
    manifest << "\nscale_bits=" << settings.scale_bits << '\n';
    manifest << "curve=" << cfg.get_str("curve.profile", "secp256k1") << '\n';
    for (const auto& f : files) manifest << "share=" << f << '\n';
    std::cout << "encode: wrote " << codec.n << " shares + manifest to " << cfg.out_dir()
              << '\n';
    return kExitOk;
}

int cmd_run(const ExperimentConfig& cfg) {
    const ClusterSettings settings = cluster_settings(cfg);
    TaskSpec spec;
    spec.fn = parse_task(cfg.get_str("cluster.task", "identity"));
    spec.input = build_input(cfg);
    spec.codec = build_codec(cfg);
    spec.curve = build_curve(cfg);
    spec.mask_scale = cfg.get_f64("codec.mask_scale", 1.0);
    spec.scale_bits = settings.scale_bits;
    spec.encrypt = settings.encrypt;
    spec.jitter_ms = settings.jitter_ms;
    spec.real_sleep = settings.real_sleep;
    spec.wait = wait_policy(cfg, spec.codec.n, settings.stragglers.size());
    if (spec.fn == TaskFn::BackpropDelta) {
        spec.broadcast = random_matrix(spec.input.cols(), 4, mix_seed(cfg.seed(), "cli-bc"));
    }

    const std::vector<WorkerProfile> profiles =
        make_profiles(spec.codec.n, spec.curve, mix_seed(cfg.seed(), "cluster-keys"),
                      settings.stragglers, settings.colluders, settings.base_delay_ms,
                      settings.straggler_extra_ms);
    const JobResult job = run_job(spec, profiles, mix_seed(cfg.seed(), "cli-run"));

    for (std::size_t j = 0; j < job.outputs.size(); ++j) {
        std::ofstream out = open_output(cfg, "result_" + std::to_string(j) + ".mat");
        write_matrix(out, job.outputs[j]);
    }

    std::ofstream report = open_output(cfg, "report.csv");
    report << "# task=" << job.report.task << " wait=" << spec.wait.str()
           << " returned=" << job.report.returned_set.size() << '\n';
    report << std::setprecision(17);
    for (std::size_t j = 0; j < job.report.decode_targets_error.size(); ++j) {
        report << "# decode_error_" << j << "=" << job.report.decode_targets_error[j] << '\n';
    }
    report << "index,elapsed_ms,returned,straggler,colluder\n";
    for (std::size_t i = 0; i < job.report.n; ++i) {
        const bool returned = std::binary_search(job.report.returned_set.begin(),
                                                 job.report.returned_set.end(), i);
        report << i << ',' << job.report.per_worker_elapsed_ms[i] << ',' << (returned ? 1 : 0)
               << ',' << (profiles[i].straggler ? 1 : 0) << ','
               << (profiles[i].colluder ? 1 : 0) << '\n';
    }
    report << "summary," << job.report.wall_clock_ms << ','
           << job.report.returned_set.size() << ',' << job.report.stragglers.size() << ','
           << job.report.colluders.size() << '\n';
    std::cout << "run: |F|=" << job.report.returned_set.size()
              << " wall_clock_ms=" << job.report.wall_clock_ms << " outputs in "
              << cfg.out_dir() << '\n';
    return kExitOk;
}

namespace {

TrainConfig train_config(const ExperimentConfig& cfg, const Dataset& data,
                         TrainAlgo algo) {
    const ClusterSettings settings = cluster_settings(cfg);
    TrainConfig tc;
    tc.lr = cfg.get_f64("train.lr", 0.5);
    tc.epochs = static_cast<std::size_t>(cfg.get_u64("train.epochs", 30));
    tc.batch = static_cast<std::size_t>(cfg.get_u64("train.batch", 32));
    tc.act.hidden = parse_activation(cfg.get_str("train.activation", "relu"));
    tc.algo = algo;
    tc.n = worker_count(cfg);
    tc.k = static_cast<std::size_t>(cfg.get_u64("codec.k", 1));
    tc.t = static_cast<std::size_t>(cfg.get_u64("codec.t", 0));
    tc.stragglers = settings.stragglers;
    tc.colluders = settings.colluders;
    tc.base_delay_ms = settings.base_delay_ms;
    tc.straggler_extra_ms = settings.straggler_extra_ms;
    tc.jitter_ms = settings.jitter_ms;
    tc.mask_scale = cfg.get_f64("codec.mask_scale", 1.0);
    tc.scale_bits = settings.scale_bits;
    tc.encrypt = settings.encrypt;
    tc.seed = cfg.seed();

    tc.layers.push_back(data.x.rows());
    for (std::size_t h : cfg.get_index_list("train.layers")) tc.layers.push_back(h);
    if (tc.layers.size() == 1) tc.layers.push_back(16);  // one hidden layer by default
    tc.layers.push_back(data.y.rows());
    return tc;
}

void write_trace(const ExperimentConfig& cfg, const std::string& name,
                 const TrainTrace& trace) {
    std::ofstream out = open_output(cfg, name);
    out << std::setprecision(17);
    out << "epoch,loss,accuracy,epoch_ms\n";
    for (std::size_t e = 0; e < trace.loss.size(); ++e) {
        out << (e + 1) << ',' << trace.loss[e] << ',' << trace.accuracy[e] << ','
            << trace.epoch_ms[e] << '\n';
    }
}

}  // namespace

int cmd_train(const ExperimentConfig& cfg) {
    const std::string dataset_name = cfg.get_str("train.dataset", "blobs");
    const auto samples = static_cast<std::size_t>(cfg.get_u64("train.samples", 400));
    const Dataset full = load_dataset(dataset_name, samples, mix_seed(cfg.seed(), "data"));
    const auto [train_set, test_set] = split_dataset(full, 0.25, mix_seed(cfg.seed(), "split"));

    const std::string algo = cfg.get_str("train.algo", "spacdc");
    std::vector<std::pair<std::string, TrainAlgo>> runs;
    if (algo == "spacdc") runs = {{"spacdc", TrainAlgo::Spacdc}};
    else if (algo == "conv") runs = {{"conv", TrainAlgo::Conv}};
    else if (algo == "both")
        runs = {{"spacdc", TrainAlgo::Spacdc}, {"conv", TrainAlgo::Conv}};
    else throw ConfigError("train.algo: expected spacdc | conv | both, got '" + algo + "'");

    for (const auto& [name, kind] : runs) {
        const TrainResult result = train(train_set, &test_set, train_config(cfg, full, kind));
        write_trace(cfg, "trace_" + name + ".csv", result.trace);
        std::cout << "train[" << name << "]: final loss=" << result.trace.loss.back()
                  << " accuracy=" << result.trace.accuracy.back() << '\n';
    }
    return kExitOk;
}

int cmd_audit(const ExperimentConfig& cfg) {
    const CodecConfig codec = build_codec(cfg);
    if (codec.t < 1) throw ConfigError("audit: needs a scenario with codec.t >= 1");
    const RealMatrix x = build_input(cfg);
    AuditOptions opts;
    opts.trials = static_cast<std::size_t>(cfg.get_u64("audit.trials", 10000));
    opts.seed = mix_seed(cfg.seed(), "audit");
    const double mask_scale = cfg.get_f64("codec.mask_scale", 0.0);
    if (mask_scale > 0.0) opts.mask_scale = mask_scale;

    std::ofstream out = open_output(cfg, "audit.csv");
    out << std::setprecision(17);
    out << "colluders,trials,samples_per_side,ks_stat,ks_critical,bound_exceeded,pass\n";
    for (std::size_t count = 1; count <= codec.t + 1; ++count) {
        ClusterReport report;
        report.n = codec.n;
        for (std::size_t i = 0; i < count; ++i) report.colluders.push_back(i);
        const AuditRecord rec = collusion_audit(report, x, codec, opts);
        out << count << ',' << rec.trials << ',' << rec.samples_per_side << ','
            << rec.ks_stat << ',' << rec.ks_critical << ',' << (rec.bound_exceeded ? 1 : 0)
            << ',' << (rec.pass ? 1 : 0) << '\n';
        std::cout << "audit: colluders=" << count
                  << (rec.bound_exceeded ? " bound exceeded"
                                         : (rec.pass ? " pass" : " FAIL"))
                  << " ks=" << rec.ks_stat << '\n';
    }
    return kExitOk;
}

int cmd_bench(const ExperimentConfig& cfg) {
    using clock = std::chrono::steady_clock;
    std::vector<std::size_t> sizes = cfg.get_index_list("bench.sizes");
    if (sizes.empty()) sizes = {4, 8, 16, 32, 64, 128, 256};
    const auto rows = static_cast<std::size_t>(cfg.get_u64("bench.rows", 64));
    const auto cols = static_cast<std::size_t>(cfg.get_u64("bench.cols", 64));
    const auto reps = static_cast<std::size_t>(cfg.get_u64("bench.reps", 50));
    const auto target_count = static_cast<std::size_t>(cfg.get_u64("bench.targets", 2));

    const std::size_t n_max = *std::max_element(sizes.begin(), sizes.end());
    const CodecConfig codec = default_anchors(n_max, 2, 0);
    std::vector<double> targets(codec.beta.begin(), codec.beta.begin() + target_count);

    std::vector<ReturnedResult> pool;
    pool.reserve(n_max);
    for (std::size_t i = 0; i < n_max; ++i) {
        pool.push_back({i, random_matrix(rows, cols, mix_seed(cfg.seed(), "bench", i))});
    }

    std::ofstream decode_csv = open_output(cfg, "decode_bench.csv");
    decode_csv << "f_size,ns_per_target\n";
    for (std::size_t s : sizes) {
        if (s == 0 || s > n_max) throw ConfigError("bench.sizes: size out of range");
        const std::vector<ReturnedResult> subset(pool.begin(), pool.begin() + s);
        decode(subset, codec, targets);  // warmup
        std::vector<double> ns;
        ns.reserve(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            const auto begin = clock::now();
            const auto out = decode(subset, codec, targets);
            const auto end = clock::now();
            ns.push_back(std::chrono::duration<double, std::nano>(end - begin).count() /
                         static_cast<double>(targets.size()));
            if (out.size() != targets.size()) throw JobFailedError("bench: decode failed");
        }
        decode_csv << s << ',' << median(ns) << '\n';
    }

    std::ofstream encode_csv = open_output(cfg, "encode_bench.csv");
    encode_csv << "n,ns_per_share\n";
    const std::vector<RealMatrix> blocks = {random_matrix(rows, cols, cfg.seed()),
                                            random_matrix(rows, cols, cfg.seed() + 1)};
    for (std::size_t n : {std::size_t{4}, std::size_t{8}, std::size_t{16}, std::size_t{32},
                          std::size_t{64}}) {
        const CodecConfig c = default_anchors(n, 2, 0);
        encode(blocks, {}, c);  // warmup
        std::vector<double> ns;
        ns.reserve(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            const auto begin = clock::now();
            const auto shares = encode(blocks, {}, c);
            const auto end = clock::now();
            ns.push_back(std::chrono::duration<double, std::nano>(end - begin).count() /
                         static_cast<double>(n));
            if (shares.size() != n) throw JobFailedError("bench: encode failed");
        }
        encode_csv << n << ',' << median(ns) << '\n';
    }
    std::cout << "bench: wrote decode_bench.csv and encode_bench.csv to " << cfg.out_dir()
              << '\n';
    return kExitOk;
}

int dispatch(const std::string& command, const ExperimentConfig& cfg) {
    try {
        if (command == "encode") return cmd_encode(cfg);
        if (command == "run") return cmd_run(cfg);
        if (command == "train") return cmd_train(cfg);
        if (command == "audit") return cmd_audit(cfg);
        if (command == "bench") return cmd_bench(cfg);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const JobFailedError& e) {
        std::cerr << "job failed: " << e.what() << '\n';
        return kExitJob;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace spacdc::cli
