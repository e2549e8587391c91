#pragma once

#include "nlcsim/config.hpp"
#include "nlcsim/metrics.hpp"
#include "nlcsim/pertnlc.hpp"
#include "nlcsim/turbo.hpp"

#include <optional>
#include <string>

namespace nlcsim {

/// Transmitted data for one WDM channel of one Monte Carlo cell.
struct ChannelTx {
    SymbolFrame frame;               // with source_bits set
    std::vector<uint8_t> info_bits;  // concatenated across codewords
};

ChannelTx build_tx_channel(const ExperimentConfig& cfg, uint64_t seed, int channel,
                           const LdpcCode& code, const QamConstellation& constellation);

/// Shape, scale to launch power, and multiplex all channels of a cell.
DualPolWaveform build_composite(const ExperimentConfig& cfg, uint64_t seed,
                                double power_dbm, const LdpcCode& code,
                                const QamConstellation& constellation,
                                std::vector<ChannelTx>* tx_out);

/// Linear receiver for one channel: extract, CDC, matched filter, align,
/// MMSE to one sample/symbol. Returns the aligned frame. `reference` carries
/// the training symbols; pilot_len = 0 uses an automatic prefix length.
struct RxChainInfo {
    int alignment_shift = 0;
    double mmse_training_mse = 0.0;
};
SymbolFrame rx_linear_chain(const DualPolWaveform& rx_composite,
                            const ExperimentConfig& cfg, int channel,
                            const SymbolFrame& reference, RxChainInfo* info = nullptr,
                            std::size_t pilot_len = 0);

/// As rx_linear_chain but with single-channel DBP replacing CDC.
SymbolFrame rx_dbp_chain(const DualPolWaveform& rx_composite,
                         const ExperimentConfig& cfg, int channel,
                         const SymbolFrame& reference, double power_dbm,
                         RxChainInfo* info = nullptr, std::size_t pilot_len = 0);

/// Coupling matrix for an experiment (power-independent entries; p0 bound
/// later per cell).
CouplingMatrix experiment_matrix(const ExperimentConfig& cfg);

struct SchemeSpec {
    SchemeKind kind = SchemeKind::kConventional;
    bool rls = false;
    bool dbp = false;
    std::string label;
};
SchemeSpec parse_scheme(const std::string& s);

/// Run every configured scheme for one (power, seed) cell; optional
/// waveform/truth export for later ingestion.
std::vector<MetricRecord> process_cell(const ExperimentConfig& cfg,
                                       const CouplingMatrix& base_matrix,
                                       double power_dbm, uint64_t seed,
                                       const std::string* export_dir = nullptr);

struct ExperimentSummary {
    int completed = 0;
    int skipped = 0; // resumed from a previous run
    int failed = 0;
    std::string records_path;
    std::vector<MetricRecord> records;
};

/// Seeded Monte Carlo sweep over (power, seed) cells with crash-resume via
/// per-cell result files. Deterministic records regardless of worker count.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, int workers = 1);

/// Offline processing of a recorded waveform plus JSON sidecar. Genie and
/// calibration require truth; without it only decision-directed schemes run
/// and status lines explain what was refused.
std::vector<MetricRecord> ingest_waveform(const std::string& dpwf_path,
                                          const std::string& sidecar_path,
                                          std::vector<std::string>* status = nullptr);

/// Aggregate records into one plot table per figure spec (mean and 95% CI
/// per scheme column). Returns the output path.
std::string emit_plotdata(const std::string& records_path,
                          const std::string& figure_spec_path,
                          std::vector<std::string>* warnings = nullptr);

} // namespace nlcsim
