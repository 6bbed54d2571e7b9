#ifndef SPACDC_CLI_HPP
#define SPACDC_CLI_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace spacdc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitJob = 3;
inline constexpr int kExitIo = 4;

/// Flat key=value configuration merged from file, scenario preset and flag
/// overrides. Unknown keys are rejected; every emitted file embeds the hash
/// of the fully-resolved text plus the seed.
class ExperimentConfig {
public:
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    std::string require_str(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_f64(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_f64_list(const std::string& key) const;
    std::vector<std::size_t> get_index_list(const std::string& key) const;

    std::uint64_t seed() const { return get_u64("seed", 1); }
    std::string out_dir() const { return get_str("output.dir", "out"); }

    std::string resolved_text() const;   // sorted key=value lines
    std::string config_hash() const;     // 16 hex digits
    std::string header_line() const;     // "# config_hash=... seed=..."

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

/// Builds the merged config: file (when path nonempty), then the scenario
/// preset (s1..s4 or empty), then explicit overrides, in that order.
/// seed/out/input overrides should already be part of `overrides`.
ExperimentConfig load_config(const std::string& path, const std::string& scenario,
                             const std::vector<std::pair<std::string, std::string>>& overrides);

int cmd_encode(const ExperimentConfig& cfg);
int cmd_run(const ExperimentConfig& cfg);
int cmd_train(const ExperimentConfig& cfg);
int cmd_audit(const ExperimentConfig& cfg);
int cmd_bench(const ExperimentConfig& cfg);

/// Runs one command, mapping exceptions onto the exit-code contract.
int dispatch(const std::string& command, const ExperimentConfig& cfg);

}  // namespace spacdc::cli

#endif
