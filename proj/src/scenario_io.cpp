#include "giantloop/scenario_io.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace giantloop {

using nlohmann::json;

namespace {

std::string describe(const std::string& message, const std::optional<std::size_t>& line, const std::string& field) {
    std::string out = message;
    if (!field.empty()) out += " (field '" + field + "')";
    if (line) out += " at line " + std::to_string(*line);
    return out;
}

std::size_t line_at(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset; ++i)
        if (text[i] == '\n') ++line;
    return line;
}

// Line of the first `"key":` token in the document, if present.
std::optional<std::size_t> line_of_key(std::string_view text, std::string_view key) {
    const std::string quoted = "\"" + std::string(key) + "\"";
    for (std::size_t pos = text.find(quoted); pos != std::string_view::npos; pos = text.find(quoted, pos + 1)) {
        std::size_t after = pos + quoted.size();
        while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
        if (after < text.size() && text[after] == ':') return line_at(text, pos);
    }
    return std::nullopt;
}

std::optional<double> parse_plain(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
    return value;
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& message, const std::string& path, std::string_view key) const {
        throw ParseError(message, line_of_key(text_, key), path);
    }

    void reject_unknown(const json& object, const std::string& prefix,
                        std::initializer_list<std::string_view> allowed) const {
        for (const auto& [key, value] : object.items()) {
            bool known = false;
            for (auto name : allowed) known = known || key == name;
            if (!known) fail("unknown key '" + key + "'", prefix + key, key);
        }
    }

    const json& object_at(const json& parent, const std::string& prefix, std::string_view key) const {
        const json& value = parent.at(std::string(key));
        if (!value.is_object()) fail("expected an object", prefix + std::string(key), key);
        return value;
    }

    double number(const json& value, const std::string& path, std::string_view key) const {
        if (value.is_number()) return value.get<double>();
        if (value.is_string()) {
            if (const auto parsed = parse_scaled_number(value.get<std::string>())) return *parsed;
        }
        fail("expected a number or a multiple of pi", path, key);
    }

    void read_number(const json& object, const std::string& prefix, std::string_view key, double& out) const {
        const auto it = object.find(std::string(key));
        if (it != object.end()) out = number(*it, prefix + std::string(key), key);
    }

    void read_int(const json& object, const std::string& prefix, std::string_view key, int& out) const {
        const auto it = object.find(std::string(key));
        if (it == object.end()) return;
        if (!it->is_number_integer()) fail("expected an integer", prefix + std::string(key), key);
        out = it->get<int>();
    }

    Complex amplitude(const json& value, const std::string& path) const {
        if (value.is_number() || value.is_string()) return {number(value, path, "initial_state"), 0.0};
        if (!value.is_object()) fail("expected a number or {\"re\", \"im\"}", path, "initial_state");
        reject_unknown(value, path + ".", {"re", "im"});
        double re = 0.0, im = 0.0;
        read_number(value, path + ".", "re", re);
        read_number(value, path + ".", "im", im);
        return {re, im};
    }

private:
    std::string_view text_;
};

nlohmann::ordered_json amplitude_json(Complex value) {
    return nlohmann::ordered_json{{"re", value.real()}, {"im", value.imag()}};
}

}  // namespace

ParseError::ParseError(const std::string& message, std::optional<std::size_t> line, std::string field)
    : std::runtime_error(describe(message, line, field)), line_(line), field_(std::move(field)) {}

std::optional<double> parse_scaled_number(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    const auto pi_at = text.find("pi");
    if (pi_at == std::string_view::npos) return parse_plain(text);

    std::string_view coefficient = text.substr(0, pi_at);
    std::string_view rest = text.substr(pi_at + 2);
    if (!coefficient.empty() && coefficient.back() == '*') coefficient.remove_suffix(1);

    double scale = 1.0;
    if (coefficient == "-") {
        scale = -1.0;
    } else if (!coefficient.empty() && coefficient != "+") {
        const auto parsed = parse_plain(coefficient);
        if (!parsed) return std::nullopt;
        scale = *parsed;
    }
    if (!rest.empty()) {
        if (rest.front() != '/') return std::nullopt;
        const auto divisor = parse_plain(rest.substr(1));
        if (!divisor || *divisor == 0.0) return std::nullopt;
        scale /= *divisor;
    }
    return scale * pi;
}

ScenarioConfig parse_scenario_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), line_at(text, e.byte == 0 ? 0 : e.byte - 1), "");
    }

    const Reader r(text);
    if (!doc.is_object()) throw ParseError("scenario must be a JSON object", 1, "");
    r.reject_unknown(doc, "", {"model", "regime", "params", "freq_mod", "initial_state", "t_end", "sample_interval",
                               "step_control"});

    ScenarioConfig cfg;
    const auto model_it = doc.find("model");
    if (model_it == doc.end()) throw ParseError("missing required key 'model'", std::nullopt, "model");
    const auto model = model_it->is_string() ? parse_model(model_it->get<std::string>()) : std::nullopt;
    if (!model) r.fail("unknown model", "model", "model");
    cfg.model = *model;
    cfg.initial_state.assign(atom_count(cfg.model), Complex{});
    cfg.initial_state[0] = 1.0;

    if (const auto it = doc.find("regime"); it != doc.end()) {
        const auto regime = it->is_string() ? parse_regime(it->get<std::string>()) : std::nullopt;
        if (!regime) r.fail("unknown regime", "regime", "regime");
        cfg.regime = *regime;
    }

    if (doc.contains("params")) {
        const json& p = r.object_at(doc, "", "params");
        r.reject_unknown(p, "params.", {"chi", "phi", "tau", "delta", "omega", "theta", "m"});
        r.read_number(p, "params.", "chi", cfg.params.chi);
        r.read_number(p, "params.", "phi", cfg.params.phi);
        r.read_number(p, "params.", "tau", cfg.params.tau);
        r.read_number(p, "params.", "delta", cfg.params.delta);
        r.read_number(p, "params.", "omega", cfg.params.omega);
        r.read_number(p, "params.", "theta", cfg.params.theta);
        r.read_int(p, "params.", "m", cfg.params.m);
    }

    if (doc.contains("freq_mod")) {
        const json& f = r.object_at(doc, "", "freq_mod");
        r.reject_unknown(f, "freq_mod.", {"delta0", "delta_g_prime", "omega_prime", "theta_prime"});
        FrequencyModulation fm;
        r.read_number(f, "freq_mod.", "delta0", fm.delta0);
        r.read_number(f, "freq_mod.", "delta_g_prime", fm.delta_g_prime);
        r.read_number(f, "freq_mod.", "omega_prime", fm.omega_prime);
        r.read_number(f, "freq_mod.", "theta_prime", fm.theta_prime);
        cfg.freq_mod = fm;
    }

    if (const auto it = doc.find("initial_state"); it != doc.end()) {
        if (!it->is_array()) r.fail("expected an array", "initial_state", "initial_state");
        cfg.initial_state.clear();
        for (std::size_t i = 0; i < it->size(); ++i) {
            cfg.initial_state.push_back(r.amplitude((*it)[i], "initial_state[" + std::to_string(i) + "]"));
        }
    }

    r.read_number(doc, "", "t_end", cfg.t_end);
    r.read_number(doc, "", "sample_interval", cfg.sample_interval);

    if (doc.contains("step_control")) {
        const json& s = r.object_at(doc, "", "step_control");
        r.reject_unknown(s, "step_control.", {"max_step", "substeps_per_tau"});
        r.read_number(s, "step_control.", "max_step", cfg.step_control.max_step);
        r.read_int(s, "step_control.", "substeps_per_tau", cfg.step_control.substeps_per_tau);
    }

    require_valid(cfg);
    return cfg;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), std::nullopt, "");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    using ojson = nlohmann::ordered_json;
    const PhysicalParams& p = cfg.params;
    ojson doc;
    doc["model"] = std::string(to_string(cfg.model));
    doc["regime"] = std::string(to_string(cfg.regime));
    doc["params"] = ojson{{"chi", p.chi},     {"phi", p.phi},     {"tau", p.tau}, {"delta", p.delta},
                          {"omega", p.omega}, {"theta", p.theta}, {"m", p.m}};
    if (cfg.freq_mod) {
        doc["freq_mod"] = ojson{{"delta0", cfg.freq_mod->delta0},
                                {"delta_g_prime", cfg.freq_mod->delta_g_prime},
                                {"omega_prime", cfg.freq_mod->omega_prime},
                                {"theta_prime", cfg.freq_mod->theta_prime}};
    }
    ojson state = ojson::array();
    for (const Complex& c : cfg.initial_state) state.push_back(amplitude_json(c));
    doc["initial_state"] = state;
    doc["t_end"] = cfg.t_end;
    doc["sample_interval"] = cfg.sample_interval;
    doc["step_control"] = ojson{{"max_step", cfg.step_control.max_step},
                                {"substeps_per_tau", cfg.step_control.substeps_per_tau}};
    return doc.dump(2) + "\n";
}

}  // namespace giantloop
