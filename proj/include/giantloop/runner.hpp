#pragma once

// File-level operations behind the command-line tool: export, comparison and sweeps.

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "giantloop/analysis.hpp"
#include "giantloop/core.hpp"
#include "giantloop/integrator.hpp"

namespace giantloop {

class IncompatibleScenarios : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// CSV text: header t,P_A,P_B[,P_C],P_tot,re_uA,im_uA,... and one row per sample, 12 significant digits.
std::string timeseries_csv(const TimeSeries& series);

/// Resolved config plus integrator step and sample count, as JSON.
std::string run_metadata_json(const ScenarioConfig& cfg, const TimeSeries& series);

/// Writes content to path through a temporary file in the same directory and a rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

/// Path of the JSON sidecar written next to a CSV: same stem, extension .json.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Simulates cfg and writes the CSV and its sidecar. Throws on any failure.
TimeSeries run_to_files(const ScenarioConfig& cfg, const std::filesystem::path& csv_path);

/// run_to_files with errors reported to err. Returns the process exit status.
int run(const ScenarioConfig& cfg, const std::filesystem::path& csv_path, std::ostream& err);

struct ComparisonReport {
    std::string first;
    std::string second;
    std::vector<double> max_deviation;  // per atom, max over the common horizon of |P_j^first - P_j^second|
    double horizon = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Largest pointwise |P_j| difference per atom; the second series is linearly
/// interpolated onto the sample times of the first.
std::vector<double> max_probability_deviation(const TimeSeries& first, const TimeSeries& second);

/// Runs both scenarios over their common horizon and compares probabilities.
/// Throws IncompatibleScenarios if the model or initial state differ.
ComparisonReport compare(const ScenarioConfig& first, const ScenarioConfig& second, double tolerance,
                         std::string first_label = "first", std::string second_label = "second");

enum class SweepParameter { Chi, Omega, Theta, Tau };

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter parameter);

/// base with one parameter replaced. Sweeping omega also moves delta when base has delta == omega.
ScenarioConfig with_parameter(const ScenarioConfig& base, SweepParameter parameter, double value);

/// Period of the fastest modulation ripple in P_j: pi / |Omega| for coupling modulation (ripple at 2 Omega),
/// 2 pi / |Omega'| for frequency modulation (ripple at Omega'), or 0 without modulation.
double ripple_window(const ScenarioConfig& cfg);

struct SweepEntry {
    double value = 0.0;
    std::filesystem::path csv;
    bool ok = false;
    double final_total_probability = 0.0;
    std::string circulation;  // order label for three atoms, "n/a" for two
    std::string error;
};

/// Runs every value (concurrently), writing <param>_<index>.csv plus sidecars and summary.csv into output_dir.
/// A failing value is recorded and the remaining values still run.
std::vector<SweepEntry> sweep(const ScenarioConfig& base, SweepParameter parameter, const std::vector<double>& values,
                              const std::filesystem::path& output_dir);

std::string sweep_summary_csv(const std::vector<SweepEntry>& entries);

}  // namespace giantloop
