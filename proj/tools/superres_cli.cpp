// superres: command-line front end for phase scans, photon-number sweeps,
// peak-height fits and uncertainty analysis.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "superres/commands.hpp"

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Written to a sibling temporary first so a failed run never leaves a partial table.
void write_atomically(const std::string &path, const std::string &content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, target);
}

struct Options {
    std::string config_path;
    std::string input_path;
    std::string out_path;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    unsigned threads = 0;
};

int run(const std::string &command, const Options &opt) {
    using namespace superres;

    std::optional<ResultTable> input;
    if (!opt.input_path.empty()) {
        input = ResultTable::parse(read_file(opt.input_path));
    }

    RunConfig config;
    if (!opt.config_path.empty()) {
        config = parse_config(read_file(opt.config_path), command);
    } else if (input) {
        auto echo = input->meta("config");
        if (!echo) {
            throw ConfigError("input table carries no config echo; pass --config");
        }
        config = parse_config(*echo);
        config.command = command;
    } else {
        throw ConfigError("--config is required");
    }
    if (opt.seed) {
        config.seed = *opt.seed;
    }
    if (opt.shots) {
        if (*opt.shots == 0) {
            throw ConfigError("--shots must be >= 1");
        }
        config.shots_per_point = *opt.shots;
    }
    if (!opt.format.empty()) {
        config.format = opt.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    }

    ExecutionOptions exec{opt.threads};
    ResultTable table = run_command(config, exec, input ? &*input : nullptr);
    std::string text = render(table, config.format);
    if (opt.out_path.empty() || opt.out_path == "-") {
        std::cout << text;
    } else {
        write_atomically(opt.out_path, text);
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Monte Carlo parity / zero-photon phase measurement simulator"};
    app.set_version_flag("--version", std::string("superres ") + superres::kToolVersion);
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_path, "Output path (default: stdout)");
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", opt.seed, "Override the configured seed");
        sub->add_option("--shots", opt.shots, "Override shots per phase point");
        sub->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    };

    auto *scan = app.add_subcommand("scan", "Phase scan at one mean photon number");
    auto *sweep = app.add_subcommand("sweep", "Scans over a list of mean photon numbers");
    auto *fit = app.add_subcommand("fit-heights", "Fit visibility and dark mean to peak heights");
    auto *analyze = app.add_subcommand("analyze", "Phase uncertainty and resolution of a scan");
    for (auto *sub : {scan, sweep, fit, analyze}) {
        add_common(sub);
    }
    for (auto *sub : {fit, analyze}) {
        sub->add_option("--input", opt.input_path, "Previously emitted table to analyze")->check(CLI::ExistingFile);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto *sub : app.get_subcommands()) {
            return run(sub->get_name(), opt);
        }
    } catch (const std::exception &e) {
        std::cerr << "superres: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
