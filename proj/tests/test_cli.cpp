#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "../tools/experiments.hpp"
#include "oscilab/io.hpp"

using namespace oscilab;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& leaf) {
    const auto dir = std::filesystem::temp_directory_path() / "oscilab-cli-tests" / leaf;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config canonicalization") {
    SUBCASE("defaults fill in and the hash is stable") {
        const json a = cli::canonicalize_config("thresholds", json::object());
        CHECK(a.at("n_min") == 3);
        CHECK(a.at("n_max") == 8);
        const json b = cli::canonicalize_config("thresholds", {{"n_min", 3}});
        CHECK(cli::config_hash(a) == cli::config_hash(b));
        const json c = cli::canonicalize_config("thresholds", {{"n_min", 4}});
        CHECK(cli::config_hash(a) != cli::config_hash(c));
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(cli::canonicalize_config("thresholds", {{"grid", 7}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(cli::canonicalize_config("no-such-experiment", json::object()),
                        std::invalid_argument);
    }
}

TEST_CASE("experiment round trip through the record and replay") {
    const auto out = scratch_dir("thresholds");
    const json config = cli::canonicalize_config("thresholds", {{"n_min", 3}, {"n_max", 12}});
    const cli::RunOutcome outcome = cli::run_experiment("thresholds", config, out);
    CHECK(outcome.pass);
    const auto record = cli::write_result_record("thresholds", config, outcome, out, 1.0);
    const cli::ReplayReport report = cli::replay(record, scratch_dir("thresholds-replay"));
    CHECK(report.ok);
    CHECK(report.diffs.empty());
}

TEST_CASE("replay reports byte diffs when outputs are tampered") {
    const auto out = scratch_dir("cover");
    const json config = cli::canonicalize_config("cover", {{"count", 8}});
    const cli::RunOutcome outcome = cli::run_experiment("cover", config, out);
    auto record_path = cli::write_result_record("cover", config, outcome, out, 1.0);
    // corrupt the recorded hash
    json record = json::parse(read_file(record_path));
    record["outputs"][0]["fnv1a"] = "0000000000000000";
    std::ofstream f(record_path);
    f << record.dump(2);
    f.close();
    const cli::ReplayReport report = cli::replay(record_path, scratch_dir("cover-replay"));
    CHECK_FALSE(report.ok);
    REQUIRE(report.diffs.size() == 1);
}

TEST_CASE("kakeya experiment modes produce their tables") {
    const auto out = scratch_dir("kakeya");
    const json config = cli::canonicalize_config(
        "kakeya", {{"mode", "bilinear"}, {"delta", 1.0 / 16.0}, {"dim", 4}});
    const cli::RunOutcome outcome = cli::run_experiment("kakeya", config, out);
    CHECK(outcome.pass);
    const std::string csv = read_file(out / "kakeya.csv");
    CHECK(csv.rfind("delta,N,p,value,bound,ratio\n", 0) == 0);
}

TEST_CASE("tube family files round trip through the kakeya experiment") {
    // compression writes the family; file mode reads it back and reproduces
    // the same rasterized union volume
    const auto out = scratch_dir("kakeya-rt");
    const json write_cfg = cli::canonicalize_config(
        "kakeya", {{"mode", "compression"}, {"delta", 1.0 / 16.0}});
    const cli::RunOutcome wrote = cli::run_experiment("kakeya", write_cfg, out / "w");
    CHECK(wrote.pass);
    const json read_cfg = cli::canonicalize_config(
        "kakeya",
        {{"mode", "file"}, {"tubes", (out / "w" / "tube_families.json").string()}});
    const cli::RunOutcome loaded = cli::run_experiment("kakeya", read_cfg, out / "r");
    CHECK(loaded.metrics.at("volume").get<double>() ==
          doctest::Approx(wrote.metrics.at("volume").get<double>()).epsilon(1e-12));
}
