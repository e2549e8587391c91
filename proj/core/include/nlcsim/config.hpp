#pragma once

#include "nlcsim/channel.hpp"
#include "nlcsim/types.hpp"

#include <string>

namespace nlcsim {

/// Fully resolved run plan for one experiment. Built from a preset plus
/// overrides; hashable in canonical (key-sorted) form.
struct ExperimentConfig {
    std::string preset = "desk-scale";

    // system
    int channel_count = 3;
    double grid_spacing_hz = 37.5e9;
    double symbol_rate = 32e9;
    int samples_per_symbol = 8; // composite field oversampling
    int qam_order = 64;
    int code_rate_num = 5, code_rate_den = 6;
    int codewords_per_channel = 4; // spanning both polarizations
    double rrc_rolloff = 0.005;
    int rrc_taps = 401;

    // link
    int span_count = 10;
    double span_length_km = 80.0;
    double alpha_db_km = 0.2;
    double gamma_w_km = 1.3; // 1/(W km)
    double dispersion_d = 17.0;
    double edfa_nf_db = 4.5;
    double ssfm_step_m = 100.0;

    // receiver / NLC
    int mmse_taps = 24;
    int memory_l = 80;
    double cutoff_db = -16.0;
    int coupling_quad_points = 32;
    int rls_taps = 5;
    double rls_lambda = 0.995;
    int max_turbo_iters = 5;
    int ldpc_iters = 10;
    bool include_c00_phase = true;
    bool demap_posterior_priors = true;
    std::vector<int> rx_channels; // empty: center channel only
    // DBP baseline
    double dbp_step_km = 1.0;

    // sweep
    double power_start_dbm = -6.0;
    double power_stop_dbm = 2.0;
    double power_step_dbm = 1.0;
    std::vector<uint64_t> seeds = {1};
    std::vector<std::string> schemes = {"none", "conventional", "fec-assisted",
                                        "genie"};
    std::string output_dir = "results";
    bool export_waveforms = false;

    std::vector<double> launch_powers() const;
    std::vector<int> resolved_rx_channels() const;
    int symbols_per_channel() const; // per polarization
    LinkConfig make_link(double launch_power_dbm, uint64_t rng_seed) const;
    double composite_rate() const { return symbol_rate * samples_per_symbol; }

    void validate() const;

    /// Canonical key-sorted serialization and its FNV-1a 64 digest.
    std::string canonical_json() const;
    std::string config_hash() const;

    static ExperimentConfig preset_by_name(const std::string& name);
    /// Parse a JSON config file: {"preset": ..., "overrides": {...}, ...}.
    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
};

std::string version_string();

} // namespace nlcsim
