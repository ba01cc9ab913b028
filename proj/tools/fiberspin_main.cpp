// fiberspin command-line tool: symmetry classification, principal-axis
// reduction, spin-trajectory simulation, phase portraits, split-step field
// propagation, fiber-mode reports and the acceptance selftest.
//
// Exit codes: 0 success, 2 config/schema error, 3 domain or regime error,
// 4 numerical-quality warnings escalated by --strict.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fiberspin/json_io.hpp"
#include "fiberspin/selftest.hpp"

namespace {

using fiberspin::cli::CommandResult;
using fiberspin::cli::Format;
using fiberspin::cli::json;

struct CommonOptions {
    std::string config_path;
    std::string output_path;
    std::string format = "default";
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_config = true) {
    auto* cfg = cmd->add_option("--config", opts.config_path, "JSON configuration file");
    if (needs_config) cfg->required();
    cmd->add_option("--output", opts.output_path, "write results to this file instead of stdout");
    cmd->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json", "default"}));
    cmd->add_flag("--strict", opts.strict, "escalate numerical-quality warnings to exit code 4");
}

Format parse_format(const std::string& f) {
    if (f == "csv") return Format::Csv;
    if (f == "json") return Format::Json;
    return Format::Default;
}

void error_json(const char* type, const std::string& message) {
    json e;
    e["error"] = {{"type", type}, {"message", message}};
    std::cerr << e.dump() << "\n";
}

int run_command(const CommonOptions& opts,
                const std::function<CommandResult(const json&, Format)>& fn) {
    try {
        const json config = fiberspin::cli::load_config(opts.config_path);
        const CommandResult result = fn(config, parse_format(opts.format));
        if (opts.output_path.empty()) {
            std::cout << result.body;
        } else {
            std::ofstream out(opts.output_path);
            if (!out) {
                error_json("io", "cannot open output file: " + opts.output_path);
                return 3;
            }
            out << result.body;
        }
        if (!result.warnings.empty()) {
            json w;
            w["warnings"] = result.warnings;
            std::cerr << w.dump() << "\n";
            if (opts.strict) return 4;
        }
        return 0;
    } catch (const fiberspin::cli::SchemaError& e) {
        error_json("schema", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        error_json("domain", e.what());
        return 3;
    } catch (const std::exception& e) {
        error_json("internal", e.what());
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polarization dynamics in nonlinear birefringent fibers"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        CommandResult (*fn)(const json&, Format);
    };
    const Sub subs[] = {
        {"classify", "crystal-family constraint table and Hamiltonian-form verdict",
         fiberspin::cli::cmd_classify},
        {"reduce", "principal-axis reduction, energy bounds and fixed points",
         fiberspin::cli::cmd_reduce},
        {"simulate", "spin trajectory at fixed energy (analytic, numeric or both)",
         fiberspin::cli::cmd_simulate},
        {"portrait", "orbit samples over an energy sweep for phase portraits",
         fiberspin::cli::cmd_portrait},
        {"propagate", "split-step field propagation with Stokes checkpoints",
         fiberspin::cli::cmd_propagate},
        {"fibermode", "LP01 mode, V parameter, nonlinearity and length scales",
         fiberspin::cli::cmd_fibermode},
    };

    std::vector<std::pair<CommonOptions, const Sub*>> registered;
    registered.reserve(std::size(subs));
    for (const auto& sub : subs) {
        registered.emplace_back(CommonOptions{}, &sub);
    }
    std::size_t i = 0;
    for (const auto& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        add_common(cmd, registered[i].first);
        ++i;
    }
    CLI::App* selftest = app.add_subcommand("selftest", "run the full acceptance suite");
    CommonOptions selftest_opts;
    add_common(selftest, selftest_opts, /*needs_config=*/false);

    CLI11_PARSE(app, argc, argv);

    if (selftest->parsed()) {
        return fiberspin::selftest::run_acceptance(std::cout) ? EXIT_SUCCESS : EXIT_FAILURE;
    }
    for (std::size_t j = 0; j < registered.size(); ++j) {
        CLI::App* cmd = app.get_subcommand(registered[j].second->name);
        if (cmd->parsed()) {
            auto fn = registered[j].second->fn;
            return run_command(registered[j].first,
                               [fn](const json& c, Format f) { return fn(c, f); });
        }
    }
    return EXIT_FAILURE;
}
