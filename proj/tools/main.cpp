#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiments.hpp"
#include "oscilab/field.hpp"
#include "oscilab/io.hpp"
#include "oscilab/rational.hpp"
#include "oscilab/reduction.hpp"

using nlohmann::json;
using oscilab::cli::RunOutcome;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("OSCILAB_OUT")) return env;
    return "out";
}

int run_one(const std::string& experiment, const CommonArgs& common, json overrides) {
    oscilab::set_default_threads(common.threads);
    json config = json::object();
    if (!common.config_path.empty()) config = json::parse(oscilab::read_file(common.config_path));
    for (auto& [key, value] : overrides.items()) config[key] = value;
    if (common.seed_set) config["seed"] = common.seed;

    json canonical;
    try {
        canonical = oscilab::cli::canonicalize_config(experiment, config);
    } catch (const std::exception& e) {
        std::cerr << json({{"error", "config"}, {"detail", e.what()}}).dump() << "\n";
        return 2;
    }
    const auto out_dir = std::filesystem::path(resolve_out_dir(common.out_dir)) / experiment;
    const auto start = std::chrono::steady_clock::now();
    RunOutcome outcome;
    try {
        outcome = oscilab::cli::run_experiment(experiment, canonical, out_dir);
    } catch (const oscilab::ResolutionError& e) {
        std::cerr << json({{"error", "resolution"},
                           {"detail", e.what()},
                           {"required_spacing", e.required_spacing()}})
                         .dump()
                  << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << json({{"error", "run"}, {"detail", e.what()}}).dump() << "\n";
        return 2;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    oscilab::cli::write_result_record(experiment, canonical, outcome, out_dir, wall_ms);
    std::cout << experiment << ": " << outcome.verdict << " [" << (outcome.pass ? "ok" : "fail")
              << ", " << oscilab::CsvWriter::format_double(wall_ms) << " ms, hash "
              << oscilab::cli::config_hash(canonical) << "]\n";
    return outcome.pass ? 0 : 1;
}

// Comma-separated numbers, each "p", "p/q", or decimal.
json parse_list(const std::string& csv) {
    json arr = json::array();
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? csv.npos : comma - pos);
        if (tok.find('/') != std::string::npos)
            arr.push_back(oscilab::Rational::parse(tok).to_double());
        else
            arr.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return arr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscilab: desk-scale oscillatory integral and Kakeya experiments"};
    app.require_subcommand(1);

    CommonArgs common;
    json overrides = json::object();

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "JSON config file");
        cmd->add_option("--out", common.out_dir, "output directory (default $OSCILAB_OUT or ./out)");
        cmd->add_option("--threads", common.threads, "worker threads (0 = hardware)");
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) {
                common.seed = s;
                common.seed_set = true;
            },
            "random seed override");
    };

    auto* thresholds = app.add_subcommand("thresholds", "exponent threshold tables");
    add_common(thresholds);
    thresholds->add_option_function<std::string>(
        "--n", [&](std::string range) {
            const auto dots = range.find("..");
            if (dots == std::string::npos) {
                overrides["n_min"] = overrides["n_max"] = std::stoi(range);
            } else {
                overrides["n_min"] = std::stoi(range.substr(0, dots));
                overrides["n_max"] = std::stoi(range.substr(dots + 2));
            }
        },
        "dimension range, e.g. 3..6");

    auto* qr = app.add_subcommand("qr-sweep", "Q_R candidate sweep over R");
    add_common(qr);
    qr->add_option_function<std::string>(
        "--R", [&](std::string v) { overrides["radii"] = parse_list(v); }, "radii, e.g. 8,16,32");
    qr->add_option_function<std::string>(
        "--p", [&](std::string v) { overrides["p"] = v; }, "Lebesgue exponent (rationals ok)");
    qr->add_flag_function(
        "--expect-growth", [&](std::int64_t) { overrides["expect_growth"] = true; },
        "pass iff the fitted slope is positive");

    auto* decompose = app.add_subcommand("decompose", "broad/narrow classification dump");
    add_common(decompose);
    decompose->add_option_function<double>(
        "--K", [&](double v) { overrides["K"] = v; }, "cap scale parameter");
    decompose->add_option_function<double>(
        "--K1", [&](double v) { overrides["K1"] = v; }, "secondary scale parameter");

    auto* kakeya = app.add_subcommand("kakeya", "tube family integrals");
    add_common(kakeya);
    kakeya->add_option_function<std::string>(
        "--mode", [&](std::string v) { overrides["mode"] = v; },
        "multilinear | bilinear | compression | bush | file");
    kakeya->add_option_function<double>(
        "--delta", [&](double v) { overrides["delta"] = v; }, "tube width");
    kakeya->add_option_function<int>(
        "--N", [&](int v) { overrides["N"] = v; }, "tubes per family");
    kakeya->add_option_function<double>(
        "--angle", [&](double v) { overrides["angle"] = v; }, "bilinear crossing angle");
    kakeya->add_option_function<std::string>(
        "--tubes", [&](std::string v) {
            overrides["mode"] = "file";
            overrides["tubes"] = v;
        },
        "tube family JSON file to load and measure");

    auto* elliptic = app.add_subcommand("example-elliptic", "chirped-strip lower bound sweep");
    add_common(elliptic);
    elliptic->add_option_function<std::string>(
        "--lambda", [&](std::string v) { overrides["lambdas"] = parse_list(v); },
        "lambda sweep, e.g. 64,128,256,512");
    elliptic->add_option_function<std::string>(
        "--q", [&](std::string v) { overrides["q"] = v; }, "Lebesgue exponent (rationals ok)");

    auto* hyperbolic = app.add_subcommand("example-hyperbolic", "hyperbolic chirp magnitude sweep");
    add_common(hyperbolic);
    hyperbolic->add_option_function<std::string>(
        "--lambda", [&](std::string v) { overrides["lambdas"] = parse_list(v); }, "lambda sweep");

    auto* cover = app.add_subcommand("cover", "sparse covering of a cube set");
    add_common(cover);
    cover->add_option_function<std::string>(
        "--fixture", [&](std::string v) { overrides["fixture"] = v; }, "row | file");
    cover->add_option_function<int>(
        "--count", [&](int v) { overrides["count"] = v; }, "cubes in the row fixture");
    cover->add_option_function<std::string>(
        "--cubes", [&](std::string v) {
            overrides["fixture"] = "file";
            overrides["file"] = v;
        },
        "JSON file with integer corner tuples");
    cover->add_option_function<double>(
        "--delta", [&](double v) { overrides["delta"] = v; }, "covering exponent delta");

    auto* ortho = app.add_subcommand("orthogonality", "cap-sum L2 orthogonality sweep");
    add_common(ortho);
    ortho->add_option_function<std::string>(
        "--R", [&](std::string v) { overrides["radii"] = parse_list(v); }, "radii sweep");

    auto* replay_cmd = app.add_subcommand("replay", "re-run a result record and compare bytes");
    std::string record_path;
    std::string scratch_dir;
    replay_cmd->add_option("record", record_path, "path to result.json")->required();
    replay_cmd->add_option("--scratch", scratch_dir, "scratch directory for the re-run");
    replay_cmd->add_option("--threads", common.threads, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    if (replay_cmd->parsed()) {
        oscilab::set_default_threads(common.threads);
        const auto scratch = scratch_dir.empty()
                                 ? std::filesystem::path(resolve_out_dir("")) / "replay-scratch"
                                 : std::filesystem::path(scratch_dir);
        try {
            const auto report = oscilab::cli::replay(record_path, scratch);
            if (report.ok) {
                std::cout << "replay: outputs reproduced bit-exactly\n";
                return 0;
            }
            std::cout << "replay: MISMATCH\n";
            for (const auto& d : report.diffs) std::cout << "  " << d << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << json({{"error", "replay"}, {"detail", e.what()}}).dump() << "\n";
            return 2;
        }
    }

    for (const std::string& name : oscilab::cli::experiment_names()) {
        CLI::App* sub = app.get_subcommand(name);
        if (sub != nullptr && sub->parsed()) return run_one(name, common, overrides);
    }
    std::cerr << "no subcommand\n";
    return 2;
}
