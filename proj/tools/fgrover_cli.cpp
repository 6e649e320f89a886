// Command-line driver: cavity search runs, pulse trains, discrete reference
// runs and parameter sweeps.
//
// Exit codes: 0 success, 2 configuration error, 3 simulation error, 4 I/O error.

#include "fgrover/errors.hpp"
#include "fgrover/runner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

struct Options {
    std::string config_path;
    std::string preset;
    std::string out;
    std::optional<int> workers;
    std::optional<bool> compensate_loss;
};

void add_common(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--config", opt.config_path, "JSON configuration file");
    cmd->add_option("--preset", opt.preset, "Named preset (paper-42um, paper-84um, paper-126um, ideal)");
    cmd->add_option("--out", opt.out, "Output directory (overrides output_dir)");
    cmd->add_option("--workers", opt.workers, "Concurrent sweep points")->check(CLI::Range(1, 1024));
    cmd->add_option("--compensate-loss", opt.compensate_loss, "Rescale profiles by loss^-iteration (true/false)");
}

nlohmann::json build_document(const Options& opt)
{
    nlohmann::json doc = nlohmann::json::object();
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path, std::ios::binary);
        if (!in)
            throw fgrover::IoError(fmt::format("cannot open configuration file '{}'", opt.config_path));
        std::ostringstream buf;
        buf << in.rdbuf();
        doc = fgrover::parse_config_text(buf.str());
        if (!doc.is_object())
            throw fgrover::ConfigError("configuration document must be an object");
    }
    if (!opt.preset.empty())
        doc["preset"] = opt.preset;
    if (!opt.out.empty())
        doc["output_dir"] = opt.out;
    if (opt.workers)
        doc["workers"] = *opt.workers;
    if (opt.compensate_loss)
        doc["loss_compensation"] = *opt.compensate_loss;
    return doc;
}

void report(const fgrover::RunOutput& out, const std::string& dir)
{
    const auto& s = out.summary;
    std::cout << "wrote";
    for (const auto& f : out.files)
        std::cout << ' ' << f.name;
    std::cout << " to " << dir << '\n';
    for (const char* key : {"first_maximum", "estimate_nm", "expected_nm", "success_probability",
                            "max_success_probability", "slit_energy_max_iteration"})
        if (s.contains(key))
            std::cout << "  " << key << " = " << s[key].dump() << '\n';
    if (s.contains("points"))
        std::cout << "  sweep points = " << s["points"].size() << '\n';
}

int execute(const std::string& command, const Options& opt)
{
    auto doc = build_document(opt);
    if (command == "pulse-train")
        doc["mode"] = "pulse-train";
    else if (command == "reference")
        doc["mode"] = "reference";

    const auto config = fgrover::expand_config(doc);
    if (command != "sweep" && !config.sweep.empty())
        throw fgrover::ConfigError("configuration defines sweep axes; use the 'sweep' subcommand");

    const auto out = command == "sweep" ? fgrover::run_sweep(config, config.workers)
                                        : fgrover::run_experiment(config);
    fgrover::write_outputs(out, config.output_dir);
    report(out, config.output_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fourier-optics Grover search cavity simulator"};
    app.set_version_flag("--version", std::string(fgrover::artifact_version));
    app.require_subcommand(1);

    Options opt;
    std::string command;
    for (const auto& [name, help] : std::initializer_list<std::pair<const char*, const char*>>{
             {"run", "Run the configured mode (default: search)"},
             {"sweep", "Run the Cartesian product of the configured sweep axes"},
             {"pulse-train", "Record slit energies of successive output pulses"},
             {"reference", "Run the discrete amplitude-amplification model"}}) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, opt);
        sub->callback([&command, n = std::string(name)] { command = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return execute(command, opt);
    } catch (const fgrover::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << '\n';
        return 3;
    }
}
