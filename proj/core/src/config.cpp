#include "nlcsim/config.hpp"

#include "nlcsim/ldpc.hpp"
#include "nlcsim/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace nlcsim {

using nlohmann::json;

std::string version_string() { return "nlcsim 0.1.0"; }

std::vector<double> ExperimentConfig::launch_powers() const {
    std::vector<double> p;
    if (power_step_dbm <= 0.0) {
        p.push_back(power_start_dbm);
        return p;
    }
    for (double v = power_start_dbm; v <= power_stop_dbm + 1e-9; v += power_step_dbm)
        p.push_back(v);
    return p;
}

std::vector<int> ExperimentConfig::resolved_rx_channels() const {
    if (!rx_channels.empty()) return rx_channels;
    return {channel_count / 2};
}

int ExperimentConfig::symbols_per_channel() const {
    const int bps = (qam_order == 16) ? 4 : 6;
    const long bits = long(codewords_per_channel) * LdpcCode::kBlockLen;
    return int(bits / (2 * bps));
}

LinkConfig ExperimentConfig::make_link(double launch_power_dbm, uint64_t rng_seed) const {
    FiberParams fiber;
    fiber.alpha_db_km = alpha_db_km;
    fiber.gamma = gamma_w_km * 1e-3;
    fiber.dispersion_D = dispersion_d;
    fiber.length_km = span_length_km;
    LinkConfig link = LinkConfig::uniform(span_count, fiber);
    link.edfa_noise_figure_db = edfa_nf_db;
    link.launch_power_dbm_per_channel = launch_power_dbm;
    link.ssfm_step_m = ssfm_step_m;
    link.rng_seed = rng_seed;
    return link;
}

void ExperimentConfig::validate() const {
    if (channel_count < 1 || channel_count % 2 == 0)
        throw ConfigError("config: channel_count must be odd");
    if (qam_order != 16 && qam_order != 64)
        throw ConfigError("config: qam_order must be 16 or 64");
    const int bps = (qam_order == 16) ? 4 : 6;
    if ((long(codewords_per_channel) * LdpcCode::kBlockLen) % (2 * bps) != 0)
        throw ConfigError("config: codewords must map to whole symbols");
    if (samples_per_symbol < 2) throw ConfigError("config: samples_per_symbol >= 2");
    const double needed = double(channel_count - 1) * grid_spacing_hz +
                          (1.0 + rrc_rolloff) * symbol_rate;
    if (composite_rate() < needed)
        throw ConfigError("config: composite bandwidth too small for the WDM grid");
    if (seeds.empty()) throw ConfigError("config: seeds must be non-empty");
    for (int ch : resolved_rx_channels())
        if (ch < 0 || ch >= channel_count)
            throw ConfigError("config: rx channel index out of range");
}

namespace {

json to_json(const ExperimentConfig& c) {
    json j;
    j["preset"] = c.preset;
    j["channel_count"] = c.channel_count;
    j["grid_spacing_hz"] = c.grid_spacing_hz;
    j["symbol_rate"] = c.symbol_rate;
    j["samples_per_symbol"] = c.samples_per_symbol;
    j["qam_order"] = c.qam_order;
    j["code_rate"] = std::to_string(c.code_rate_num) + "/" + std::to_string(c.code_rate_den);
    j["codewords_per_channel"] = c.codewords_per_channel;
    j["rrc_rolloff"] = c.rrc_rolloff;
    j["rrc_taps"] = c.rrc_taps;
    j["span_count"] = c.span_count;
    j["span_length_km"] = c.span_length_km;
    j["alpha_db_km"] = c.alpha_db_km;
    j["gamma_w_km"] = c.gamma_w_km;
    j["dispersion_d"] = c.dispersion_d;
    j["edfa_nf_db"] = c.edfa_nf_db;
    j["ssfm_step_m"] = c.ssfm_step_m;
    j["mmse_taps"] = c.mmse_taps;
    j["memory_l"] = c.memory_l;
    j["cutoff_db"] = c.cutoff_db;
    j["coupling_quad_points"] = c.coupling_quad_points;
    j["rls_taps"] = c.rls_taps;
    j["rls_lambda"] = c.rls_lambda;
    j["max_turbo_iters"] = c.max_turbo_iters;
    j["ldpc_iters"] = c.ldpc_iters;
    j["include_c00_phase"] = c.include_c00_phase;
    j["demap_posterior_priors"] = c.demap_posterior_priors;
    j["rx_channels"] = c.rx_channels;
    j["dbp_step_km"] = c.dbp_step_km;
    j["power_start_dbm"] = c.power_start_dbm;
    j["power_stop_dbm"] = c.power_stop_dbm;
    j["power_step_dbm"] = c.power_step_dbm;
    j["seeds"] = c.seeds;
    j["schemes"] = c.schemes;
    j["export_waveforms"] = c.export_waveforms;
    return j;
}

void parse_rate(const std::string& s, int& num, int& den) {
    const auto slash = s.find('/');
    if (slash == std::string::npos)
        throw ConfigError("config: code_rate must look like 5/6");
    num = std::stoi(s.substr(0, slash));
    den = std::stoi(s.substr(slash + 1));
}

void apply_overrides(ExperimentConfig& c, const json& o) {
    for (auto it = o.begin(); it != o.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "channel_count") c.channel_count = v.get<int>();
        else if (k == "grid_spacing_hz") c.grid_spacing_hz = v.get<double>();
        else if (k == "symbol_rate") c.symbol_rate = v.get<double>();
        else if (k == "samples_per_symbol") c.samples_per_symbol = v.get<int>();
        else if (k == "qam_order") c.qam_order = v.get<int>();
        else if (k == "code_rate") parse_rate(v.get<std::string>(), c.code_rate_num, c.code_rate_den);
        else if (k == "codewords_per_channel") c.codewords_per_channel = v.get<int>();
        else if (k == "rrc_rolloff") c.rrc_rolloff = v.get<double>();
        else if (k == "rrc_taps") c.rrc_taps = v.get<int>();
        else if (k == "span_count") c.span_count = v.get<int>();
        else if (k == "span_length_km") c.span_length_km = v.get<double>();
        else if (k == "alpha_db_km") c.alpha_db_km = v.get<double>();
        else if (k == "gamma_w_km") c.gamma_w_km = v.get<double>();
        else if (k == "dispersion_d") c.dispersion_d = v.get<double>();
        else if (k == "edfa_nf_db") c.edfa_nf_db = v.get<double>();
        else if (k == "ssfm_step_m") c.ssfm_step_m = v.get<double>();
        else if (k == "mmse_taps") c.mmse_taps = v.get<int>();
        else if (k == "memory_l") c.memory_l = v.get<int>();
        else if (k == "cutoff_db") c.cutoff_db = v.get<double>();
        else if (k == "coupling_quad_points") c.coupling_quad_points = v.get<int>();
        else if (k == "rls_taps") c.rls_taps = v.get<int>();
        else if (k == "rls_lambda") c.rls_lambda = v.get<double>();
        else if (k == "max_turbo_iters") c.max_turbo_iters = v.get<int>();
        else if (k == "ldpc_iters") c.ldpc_iters = v.get<int>();
        else if (k == "include_c00_phase") c.include_c00_phase = v.get<bool>();
        else if (k == "demap_posterior_priors") c.demap_posterior_priors = v.get<bool>();
        else if (k == "rx_channels") c.rx_channels = v.get<std::vector<int>>();
        else if (k == "dbp_step_km") c.dbp_step_km = v.get<double>();
        else throw ConfigError("config: unknown override key: " + k);
    }
}

} // namespace

ExperimentConfig ExperimentConfig::preset_by_name(const std::string& name) {
    ExperimentConfig c;
    c.preset = name;
    if (name == "desk-scale") {
        // defaults above
    } else if (name == "paper-sim-64qam") {
        c.channel_count = 5;
        c.samples_per_symbol = 16;
        c.codewords_per_channel = 8; // four blocks per polarization
        c.span_count = 20;
        c.rls_taps = 5;
        c.rx_channels = {0, 1, 2, 3, 4};
    } else if (name == "paper-exp-16qam") {
        c.channel_count = 5;
        c.samples_per_symbol = 16;
        c.grid_spacing_hz = 50e9;
        c.qam_order = 16;
        c.codewords_per_channel = 8;
        c.rrc_rolloff = 0.5;
        c.span_count = 60;
        c.span_length_km = 70.0;
        c.rls_taps = 3;
        c.ldpc_iters = 5;
        c.rx_channels = {0, 1, 2, 3, 4};
        c.power_start_dbm = -4.0;
        c.power_stop_dbm = 3.0;
    } else if (name == "desk-scale-16qam") {
        c.grid_spacing_hz = 50e9;
        c.qam_order = 16;
        c.codewords_per_channel = 2;
        c.rrc_rolloff = 0.5;
        c.span_count = 26;
        c.rls_taps = 3;
        c.ldpc_iters = 5;
        c.power_start_dbm = -4.0;
        c.power_stop_dbm = 3.0;
    } else {
        throw ConfigError("config: unknown preset: " + name);
    }
    return c;
}

std::string ExperimentConfig::canonical_json() const {
    return to_json(*this).dump(); // nlohmann objects iterate key-sorted
}

std::string ExperimentConfig::config_hash() const {
    const uint64_t h = fnv1a64(canonical_json());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c = preset_by_name(j.value("preset", std::string("desk-scale")));
    if (j.contains("overrides")) apply_overrides(c, j["overrides"]);
    if (j.contains("launch_power_dbm")) {
        const auto& p = j["launch_power_dbm"];
        c.power_start_dbm = p.value("start", c.power_start_dbm);
        c.power_stop_dbm = p.value("stop", c.power_stop_dbm);
        c.power_step_dbm = p.value("step", c.power_step_dbm);
    }
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<uint64_t>>();
    if (j.contains("schemes")) c.schemes = j["schemes"].get<std::vector<std::string>>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("export_waveforms")) c.export_waveforms = j["export_waveforms"].get<bool>();
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return from_json_text(ss.str());
    } catch (const json::exception& e) {
        throw ConfigError("config: parse error in " + path + ": " + e.what());
    }
}

} // namespace nlcsim
