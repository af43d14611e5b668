#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace oscilab::cli {

struct RunOutcome {
    bool pass = true;
    std::string verdict;                  // one-line summary
    std::vector<std::string> outputs;     // file names written under out_dir
    nlohmann::json metrics;               // experiment-specific numbers
};

/// Canonical form: defaults filled in, keys sorted (nlohmann objects sort),
/// numbers normalized by the JSON round-trip.
nlohmann::json canonicalize_config(const std::string& experiment, nlohmann::json config);
std::string config_hash(const nlohmann::json& canonical);

/// Runs one experiment into out_dir and writes its files. Throws on invalid
/// configs; module precondition violations surface as ResolutionError.
RunOutcome run_experiment(const std::string& experiment, const nlohmann::json& config,
                          const std::filesystem::path& out_dir);

/// Writes the ResultRecord (config, hash, outputs with byte hashes, verdict,
/// wall clock) next to the experiment outputs.
std::filesystem::path write_result_record(const std::string& experiment,
                                          const nlohmann::json& canonical,
                                          const RunOutcome& outcome,
                                          const std::filesystem::path& out_dir, double wall_ms);

struct ReplayReport {
    bool ok = true;
    std::vector<std::string> diffs;
};

/// Re-runs the recorded experiment into a scratch directory and compares
/// every recorded output byte for byte.
ReplayReport replay(const std::filesystem::path& record_path,
                    const std::filesystem::path& scratch_dir);

const std::vector<std::string>& experiment_names();

}  // namespace oscilab::cli
