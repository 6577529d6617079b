#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fpsvqe/driver.h"

namespace fpsvqe {

/// Malformed or unknown configuration input.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` settings. Lines starting with '#' and blank lines are ignored;
/// everything after the first '=' is the value, trimmed. Later assignments win.
class KeyValueConfig {
   public:
    static KeyValueConfig parse(std::istream &in, const std::string &source = "<input>");
    static KeyValueConfig load(const std::string &path);

    void set(const std::string &key, const std::string &value);
    /// "key=value" as given on a command line.
    void assign(std::string_view assignment);

    bool has(const std::string &key) const {
        return values_.count(key) != 0;
    }
    std::optional<std::string> get(const std::string &key) const;
    const std::map<std::string, std::string> &values() const {
        return values_;
    }
    void write(std::ostream &out) const;

   private:
    std::map<std::string, std::string> values_;
};

/// Everything a CLI subcommand can be told.
struct ExperimentConfig {
    VqeConfig vqe;
    std::vector<double> barriers = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<KeptCounts> bases = rotor_chain_ladder();
    size_t dist_repetitions = 1000;
    uint64_t dist_shots = 20000;
    std::vector<EstimateMode> dist_modes = {EstimateMode::Sampled, EstimateMode::Noisy};
    /// Empty: optimize once (exact mode) and use the best parameters found.
    std::vector<double> dist_params;
};

/// Applies the recognized keys to defaults. Unknown keys and unparsable values throw ConfigError.
ExperimentConfig experiment_from(const KeyValueConfig &kv);
/// The effective configuration, fully spelled out; experiment_from() of it reproduces `config`.
KeyValueConfig to_key_values(const ExperimentConfig &config);

/// The keys experiment_from() understands, with a one-line description each.
const std::vector<std::pair<std::string, std::string>> &config_keys();

EstimateMode parse_estimate_mode(std::string_view text);

}  // namespace fpsvqe
