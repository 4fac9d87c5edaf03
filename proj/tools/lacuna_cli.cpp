// lacuna: run one experiment from a JSON config and write its reports.
//
//   lacuna <command> [--config PATH] [--out DIR] [--seed U64] [--threads K] [--force]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 bad config or
// arguments, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lacuna/config.hpp"
#include "lacuna/experiments.hpp"
#include "lacuna/log.hpp"
#include "lacuna/parallel.hpp"
#include "lacuna/spectral.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool force = false;
};

void write_file(const fs::path& p, const std::string& bytes)
{
    std::ofstream os(p, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("cannot write " + p.string());
}

int run(const std::string& command, const Options& opt)
{
    const std::string config_path = opt.config.empty() ? "configs/" + command + ".json" : opt.config;
    lacuna::ExperimentConfig cfg;
    try {
        cfg = lacuna::load_config(config_path);
        if (cfg.experiment != command)
            throw lacuna::ConfigError("config is for '" + cfg.experiment + "', not '" + command + "'");
        if (opt.seed) cfg.seed = *opt.seed;
    } catch (const lacuna::ConfigError& e) {
        std::cerr << "lacuna: " << e.what() << "\n";
        return 2;
    }

    const fs::path out = opt.out.empty() ? fs::path("out") / command : fs::path(opt.out);
    std::error_code ec;
    if (fs::exists(out, ec) && !(fs::is_directory(out, ec) && fs::is_empty(out, ec)) && !opt.force) {
        std::cerr << "lacuna: output " << out.string() << " exists and is not empty (use --force)\n";
        return 2;
    }

    lacuna::set_default_threads(opt.threads);
    std::optional<lacuna::ExperimentOutput> result;
    try {
        result.emplace(lacuna::run_experiment(cfg));
    } catch (const lacuna::ConfigError& e) {
        std::cerr << "lacuna: " << e.what() << "\n";
        return 2;
    } catch (const lacuna::NumericalError& e) {
        std::cerr << "lacuna: numerical failure: " << e.what() << "\n";
        return 3;
    }

    fs::create_directories(out);
    write_file(out / "report.csv", result->report.csv());
    write_file(out / "summary.json", result->report.summary_json().dump(2) + "\n");
    for (const auto& [name, bytes] : result->files) write_file(out / name, bytes);
    std::cout << result->report.one_line() << "\n";
    return result->report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Directional multiplier experiments on the torus"};
    app.set_version_flag("--version", lacuna::Report::version());
    app.require_subcommand(1);

    Options opt;
    std::string chosen;
    for (const auto& name : lacuna::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", opt.config, "config file (default configs/" + name + ".json)");
        sub->add_option("--out", opt.out, "output directory (default out/" + name + ")");
        sub->add_option("--seed", opt.seed, "override the config seed");
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1, 1024));
        sub->add_flag("--force", opt.force, "allow writing into a non-empty output directory");
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(chosen, opt);
    } catch (const std::exception& e) {
        lacuna::log::error(e.what());
        return 3;
    }
}
