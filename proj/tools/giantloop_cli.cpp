#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "giantloop/presets.hpp"
#include "giantloop/runner.hpp"
#include "giantloop/scenario_io.hpp"

namespace {

using namespace giantloop;

void print_diagnostics(const ValidationError& e) {
    std::cerr << "error: invalid scenario\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  - " << d << '\n';
}

// Runs body, mapping every failure to a message on stderr and exit status 1.
template <typename Body>
int guarded(Body&& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        print_diagnostics(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> values;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto value = parse_scaled_number(item);
        if (!value) throw std::invalid_argument("cannot read sweep value '" + item + "'");
        values.push_back(*value);
    }
    if (values.empty()) throw std::invalid_argument("no sweep values given");
    return values;
}

std::string format(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", value);
    return buffer;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Giant-atom amplitude dynamics with modulated decoherence-free couplings"};
    app.require_subcommand(1);

    std::string config_path, output_path;
    auto* simulate_cmd = app.add_subcommand("simulate", "Integrate a scenario file and write CSV plus JSON sidecar");
    simulate_cmd->add_option("config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    simulate_cmd->add_option("-o,--output", output_path, "Output CSV")->required();

    std::string preset_name, preset_config_out;
    bool list_presets = false;
    auto* preset_cmd = app.add_subcommand("preset", "Run a named figure preset");
    preset_cmd->add_option("name", preset_name, "Preset name");
    preset_cmd->add_option("-o,--output", output_path, "Output CSV");
    preset_cmd->add_option("--write-config", preset_config_out, "Also write the preset's scenario JSON here");
    preset_cmd->add_flag("--list", list_presets, "List preset names and exit");

    std::string first_path, second_path;
    double tolerance = 0.03;
    auto* compare_cmd = app.add_subcommand("compare", "Compare two scenarios sample by sample");
    compare_cmd->add_option("first", first_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("second", second_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--tol", tolerance, "Largest acceptable probability deviation")->capture_default_str();

    std::string base_path, parameter_name, values_list, output_dir;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over several values of one parameter");
    sweep_cmd->add_option("base", base_path, "Base scenario JSON")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--param", parameter_name, "chi, omega, theta or tau")->required();
    sweep_cmd->add_option("--values", values_list, "Comma-separated values; 'pi' multiples allowed")->required();
    sweep_cmd->add_option("-o,--output", output_dir, "Output directory")->required();

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file without running it");
    validate_cmd->add_option("config", validate_path, "Scenario JSON")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (simulate_cmd->parsed()) {
        return guarded([&] { return run(parse_scenario(config_path), output_path, std::cerr); });
    }

    if (preset_cmd->parsed()) {
        return guarded([&] {
            if (list_presets) {
                for (auto name : preset_names()) std::cout << name << '\n';
                return 0;
            }
            const auto cfg = preset(preset_name);
            if (!cfg) throw std::invalid_argument("unknown preset '" + preset_name + "' (try --list)");
            if (!preset_config_out.empty()) write_file_atomically(preset_config_out, scenario_to_json(*cfg));
            if (output_path.empty()) {
                if (preset_config_out.empty()) std::cout << scenario_to_json(*cfg);
                return 0;
            }
            return run(*cfg, output_path, std::cerr);
        });
    }

    if (compare_cmd->parsed()) {
        return guarded([&] {
            const ComparisonReport r =
                compare(parse_scenario(first_path), parse_scenario(second_path), tolerance, first_path, second_path);
            std::cout << "first:   " << r.first << '\n' << "second:  " << r.second << '\n';
            std::cout << "horizon: " << format(r.horizon) << '\n';
            static constexpr const char* labels[] = {"P_A", "P_B", "P_C"};
            for (std::size_t j = 0; j < r.max_deviation.size(); ++j) {
                std::cout << "max|d" << labels[j] << "|: " << format(r.max_deviation[j]) << '\n';
            }
            std::cout << "verdict: " << (r.passed ? "pass" : "fail") << " (tol " << format(r.tolerance) << ")\n";
            return 0;
        });
    }

    if (sweep_cmd->parsed()) {
        return guarded([&] {
            const auto parameter = parse_sweep_parameter(parameter_name);
            if (!parameter) throw std::invalid_argument("unknown sweep parameter '" + parameter_name + "'");
            const auto entries = sweep(parse_scenario(base_path), *parameter, parse_values(values_list), output_dir);
            std::cout << sweep_summary_csv(entries);
            int status = 0;
            for (const auto& e : entries) {
                if (!e.ok) {
                    std::cerr << "error: " << parameter_name << " = " << format(e.value) << ": " << e.error << '\n';
                    status = 1;
                }
            }
            return status;
        });
    }

    if (validate_cmd->parsed()) {
        return guarded([&] {
            parse_scenario(validate_path);
            std::cout << "ok\n";
            return 0;
        });
    }
    return 1;
}
