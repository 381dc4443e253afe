#include "giantloop/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>

#include "giantloop/scenario_io.hpp"

namespace giantloop {

namespace {

constexpr const char* atom_labels[] = {"A", "B", "C"};

void append_number(std::string& out, double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    out += buffer;
}

double interpolate(const TimeSeries& s, std::size_t atom, double t) {
    const auto it = std::lower_bound(s.times.begin(), s.times.end(), t);
    if (it == s.times.begin()) return s.probability(0, atom);
    if (it == s.times.end()) return s.probability(s.size() - 1, atom);
    const auto i = static_cast<std::size_t>(it - s.times.begin());
    const double t0 = s.times[i - 1], t1 = s.times[i];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * s.probability(i - 1, atom) + w * s.probability(i, atom);
}

std::string format_value(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

SweepEntry run_entry(const ScenarioConfig& cfg, double value, const std::filesystem::path& csv) {
    SweepEntry entry;
    entry.value = value;
    entry.csv = csv;
    try {
        require_valid(cfg);
        const TimeSeries series = run_to_files(cfg, csv);
        entry.final_total_probability = series.total_probability(series.size() - 1);
        entry.circulation =
            series.atoms == 3
                ? std::string(to_string(circulation_order(series, 0.3, cfg.sample_interval, ripple_window(cfg)).order))
                : "n/a";
        entry.ok = true;
    } catch (const std::exception& e) {
        entry.error = e.what();
    }
    return entry;
}

}  // namespace

std::string timeseries_csv(const TimeSeries& series) {
    std::string out = "t";
    for (std::size_t j = 0; j < series.atoms; ++j) out += std::string(",P_") + atom_labels[j];
    out += ",P_tot";
    for (std::size_t j = 0; j < series.atoms; ++j) {
        out += std::string(",re_u") + atom_labels[j] + ",im_u" + atom_labels[j];
    }
    out += '\n';

    for (std::size_t i = 0; i < series.size(); ++i) {
        append_number(out, series.times[i]);
        for (std::size_t j = 0; j < series.atoms; ++j) {
            out += ',';
            append_number(out, series.probability(i, j));
        }
        out += ',';
        append_number(out, series.total_probability(i));
        for (std::size_t j = 0; j < series.atoms; ++j) {
            out += ',';
            append_number(out, series.amplitudes[i][j].real());
            out += ',';
            append_number(out, series.amplitudes[i][j].imag());
        }
        out += '\n';
    }
    return out;
}

std::string run_metadata_json(const ScenarioConfig& cfg, const TimeSeries& series) {
    nlohmann::ordered_json doc;
    doc["config"] = nlohmann::ordered_json::parse(scenario_to_json(cfg));
    doc["step"] = series.step;
    doc["samples"] = series.size();
    return doc.dump(2) + "\n";
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + temp.string());
        out << content;
        out.close();
        if (!out) throw std::runtime_error("failed writing " + temp.string());
    }
    std::filesystem::rename(temp, path);
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".json");
    if (p == csv_path) p += ".json";
    return p;
}

TimeSeries run_to_files(const ScenarioConfig& cfg, const std::filesystem::path& csv_path) {
    TimeSeries series = simulate(cfg);
    write_file_atomically(csv_path, timeseries_csv(series));
    write_file_atomically(sidecar_path(csv_path), run_metadata_json(cfg, series));
    return series;
}

int run(const ScenarioConfig& cfg, const std::filesystem::path& csv_path, std::ostream& err) {
    try {
        run_to_files(cfg, csv_path);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

std::vector<double> max_probability_deviation(const TimeSeries& first, const TimeSeries& second) {
    if (first.atoms != second.atoms) throw IncompatibleScenarios("series have different atom counts");
    std::vector<double> deviation(first.atoms, 0.0);
    if (first.empty() || second.empty()) return deviation;
    const double horizon = std::min(first.times.back(), second.times.back());
    for (std::size_t i = 0; i < first.size() && first.times[i] <= horizon + 1e-12; ++i) {
        for (std::size_t j = 0; j < first.atoms; ++j) {
            const double d = std::abs(first.probability(i, j) - interpolate(second, j, first.times[i]));
            deviation[j] = std::max(deviation[j], d);
        }
    }
    return deviation;
}

ComparisonReport compare(const ScenarioConfig& first, const ScenarioConfig& second, double tolerance,
                         std::string first_label, std::string second_label) {
    if (first.model != second.model) throw IncompatibleScenarios("scenarios use different models");
    if (first.initial_state != second.initial_state) {
        throw IncompatibleScenarios("scenarios start from different initial states");
    }
    if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");

    ScenarioConfig a = first, b = second;
    const double horizon = std::min(first.t_end, second.t_end);
    a.t_end = b.t_end = horizon;

    auto future_b = std::async(std::launch::async, [&b] { return simulate(b); });
    const TimeSeries sa = simulate(a);
    const TimeSeries sb = future_b.get();

    ComparisonReport report;
    report.first = std::move(first_label);
    report.second = std::move(second_label);
    report.max_deviation = max_probability_deviation(sa, sb);
    report.horizon = horizon;
    report.tolerance = tolerance;
    report.passed = std::all_of(report.max_deviation.begin(), report.max_deviation.end(),
                                [tolerance](double d) { return d < tolerance; });
    return report;
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
    if (name == "chi") return SweepParameter::Chi;
    if (name == "omega") return SweepParameter::Omega;
    if (name == "theta") return SweepParameter::Theta;
    if (name == "tau") return SweepParameter::Tau;
    return std::nullopt;
}

std::string_view to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::Chi: return "chi";
        case SweepParameter::Omega: return "omega";
        case SweepParameter::Theta: return "theta";
        case SweepParameter::Tau: return "tau";
    }
    return "chi";
}

ScenarioConfig with_parameter(const ScenarioConfig& base, SweepParameter parameter, double value) {
    ScenarioConfig cfg = base;
    switch (parameter) {
        case SweepParameter::Chi: cfg.params.chi = value; break;
        case SweepParameter::Omega:
            if (base.params.delta == base.params.omega) cfg.params.delta = value;
            cfg.params.omega = value;
            break;
        case SweepParameter::Theta: cfg.params.theta = value; break;
        case SweepParameter::Tau: cfg.params.tau = value; break;
    }
    return cfg;
}

double ripple_window(const ScenarioConfig& cfg) {
    if (cfg.model == Model::DimerFrequencyMod && cfg.freq_mod) {
        const double omega = cfg.freq_mod->omega_prime;
        return omega == 0.0 ? 0.0 : 2.0 * pi / std::abs(omega);
    }
    return cfg.params.omega == 0.0 ? 0.0 : pi / std::abs(cfg.params.omega);
}

std::vector<SweepEntry> sweep(const ScenarioConfig& base, SweepParameter parameter, const std::vector<double>& values,
                              const std::filesystem::path& output_dir) {
    std::filesystem::create_directories(output_dir);
    std::vector<std::future<SweepEntry>> jobs;
    jobs.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ScenarioConfig cfg = with_parameter(base, parameter, values[i]);
        const auto csv = output_dir / (std::string(to_string(parameter)) + "_" + std::to_string(i) + ".csv");
        jobs.push_back(std::async(std::launch::async, run_entry, cfg, values[i], csv));
    }

    std::vector<SweepEntry> entries;
    entries.reserve(jobs.size());
    for (auto& job : jobs) entries.push_back(job.get());
    write_file_atomically(output_dir / "summary.csv", sweep_summary_csv(entries));
    return entries;
}

std::string sweep_summary_csv(const std::vector<SweepEntry>& entries) {
    std::string out = "value,final_P_tot,circulation,file,error\n";
    for (const SweepEntry& e : entries) {
        out += format_value(e.value);
        out += ',';
        out += e.ok ? format_value(e.final_total_probability) : "nan";
        out += ',';
        out += e.ok ? e.circulation : "";
        out += ',';
        out += e.csv.filename().string();
        out += ',';
        std::string message = e.error;
        std::replace(message.begin(), message.end(), ',', ';');
        std::replace(message.begin(), message.end(), '\n', ' ');
        out += message;
        out += '\n';
    }
    return out;
}

}  // namespace giantloop
