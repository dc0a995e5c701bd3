#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pmodlab/cli.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw pmodlab::cli::ConfigError("cannot open config file: " + path);
    }
    try {
        return nlohmann::json::parse(file);
    } catch (const nlohmann::json::parse_error& e) {
        throw pmodlab::cli::ConfigError("config " + path + ": " + e.what());
    }
}

std::string resolve_out_base(const std::string& out_base) {
    std::filesystem::path base(out_base);
    if (base.is_relative()) {
        if (const char* dir = std::getenv("PMODLAB_OUT_DIR")) {
            base = std::filesystem::path(dir) / base;
        }
    }
    return base.string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pmodlab: numerical laboratory for distance-distortion lower bounds of "
                 "ring Q-mappings with respect to the p-modulus, p > n"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_base;
    std::string format = "csv";
    std::string verify_target;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"constants", "distance-distortion constant chain c, c1, c0"},
        {"capacity", "condenser capacity bounds (Mazya lower / exact / variational / Lemma 1 upper)"},
        {"modulus", "weighted ring integral, extremal density and Lemma 1 bound"},
        {"distortion", "radial/tangential stretches, Jacobian and K_{I,p} per radius"},
        {"verify", "run a theorem checker: thm1 | cor1 | cor2 | thm2 | thm3"},
        {"sweep", "run a sub-command across a parameter grid"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "path to the JSON run configuration")
            ->required();
        sub->add_option("--out", out_base,
                        "output base path; writes <base>.csv and <base>.json "
                        "(relative paths resolve under $PMODLAB_OUT_DIR)");
        sub->add_option("--format", format, "stdout format when --out is not given")
            ->check(CLI::IsMember({"csv", "json"}));
        if (name == "verify") {
            sub->add_option("target", verify_target, "thm1|cor1|cor2|thm2|thm3")->required();
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        const nlohmann::json config = load_config(config_path);

        pmodlab::cli::CommandOutput out =
            pmodlab::cli::run_command(command, verify_target, config);

        std::string base = out_base;
        if (base.empty() && config.contains("/output/path"_json_pointer)) {
            base = config.at("/output/path"_json_pointer).get<std::string>();
        }
        std::string stdout_format = format;
        if (!app.get_subcommands().front()->count("--format") &&
            config.contains("/output/format"_json_pointer)) {
            stdout_format = config.at("/output/format"_json_pointer).get<std::string>();
        }

        if (!base.empty()) {
            pmodlab::cli::write_artifacts(out, resolve_out_base(base));
        } else if (stdout_format == "json") {
            std::cout << out.report.dump(2) << "\n";
        } else {
            std::cout << out.table.to_csv();
        }
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "pmodlab: " << e.what() << "\n";
        return 2;
    }
}
