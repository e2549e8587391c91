#include "nlcsim/harness.hpp"

#include "nlcsim/dbp.hpp"
#include "nlcsim/fft.hpp"
#include "nlcsim/rng.hpp"
#include "nlcsim/rxdsp.hpp"
#include "nlcsim/waveform_io.hpp"
#include "nlcsim/wdm.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace nlcsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RrcFilterSpec tx_pulse_spec(const ExperimentConfig& cfg) {
    RrcFilterSpec spec;
    spec.rolloff = cfg.rrc_rolloff;
    spec.num_taps = cfg.rrc_taps;
    spec.samples_per_symbol = cfg.samples_per_symbol;
    return spec;
}

Interleaver make_interleaver(const QamConstellation& c) {
    Interleaver il;
    il.rows = 2 * c.bits_per_symbol();
    il.block_len = LdpcCode::kBlockLen;
    return il;
}

double q2_or_bound(double ber, uint64_t bits) {
    // zero observed errors: report the resolution bound
    const double b = std::max(ber, 0.5 / double(std::max<uint64_t>(bits, 2)));
    if (b >= 0.5) return q2_from_ber(0.499);
    return q2_from_ber(b);
}

} // namespace

ChannelTx build_tx_channel(const ExperimentConfig& cfg, uint64_t seed, int channel,
                           const LdpcCode& code, const QamConstellation& constellation) {
    ChannelTx tx;
    const Interleaver il = make_interleaver(constellation);
    std::vector<uint8_t> sym_bits;
    sym_bits.reserve(std::size_t(cfg.codewords_per_channel) * LdpcCode::kBlockLen);
    for (int cw = 0; cw < cfg.codewords_per_channel; ++cw) {
        RandomStream bits_rng(seed, "info-bits", uint64_t(channel), uint64_t(cw));
        std::vector<uint8_t> info(code.info_len());
        for (auto& b : info) b = uint8_t(bits_rng.next_u32() & 1);
        const auto codeword = code.encode(info);
        const auto interleaved = il.interleave(codeword);
        sym_bits.insert(sym_bits.end(), interleaved.begin(), interleaved.end());
        tx.info_bits.insert(tx.info_bits.end(), info.begin(), info.end());
    }
    tx.frame = map_symbols(sym_bits, constellation, cfg.symbol_rate);
    return tx;
}

DualPolWaveform build_composite(const ExperimentConfig& cfg, uint64_t seed,
                                double power_dbm, const LdpcCode& code,
                                const QamConstellation& constellation,
                                std::vector<ChannelTx>* tx_out) {
    const RrcFilterSpec pulse = tx_pulse_spec(cfg);
    const double p_watt = dbm_to_watt(power_dbm);
    std::vector<DualPolWaveform> waves;
    waves.reserve(cfg.channel_count);
    for (int ch = 0; ch < cfg.channel_count; ++ch) {
        ChannelTx tx = build_tx_channel(cfg, seed, ch, code, constellation);
        DualPolWaveform w = shape_pulses(tx.frame, pulse);
        const double scale = std::sqrt(p_watt / w.mean_power());
        for (auto& c : w.x) c *= scale;
        for (auto& c : w.y) c *= scale;
        waves.push_back(std::move(w));
        if (tx_out) tx_out->push_back(std::move(tx));
    }
    return wdm_multiplex(waves, cfg.grid_spacing_hz, cfg.composite_rate());
}

namespace {

/// Extraction filter edges: pass the channel, stop inside the grid gap.
void extract_edges(const ExperimentConfig& cfg, double& cutoff, double& transition) {
    const double half_bw = 0.5 * (1.0 + cfg.rrc_rolloff) * cfg.symbol_rate;
    cutoff = half_bw;
    const double gap = cfg.grid_spacing_hz - 2.0 * half_bw;
    transition = std::max(0.02 * cfg.symbol_rate, 0.9 * gap);
}

std::size_t cd_wrap_guard(const ExperimentConfig& cfg, double rate) {
    CdcSpec spec;
    spec.total_dispersion_ps_nm = cfg.dispersion_d * cfg.span_length_km *
                                  cfg.span_count;
    const double spread_s = std::abs(spec.beta2_total()) * 2.0 * M_PI *
                            (1.0 + cfg.rrc_rolloff) * cfg.symbol_rate;
    return std::size_t(std::ceil(spread_s * rate));
}

/// Common tail of both receiver chains: matched filter at 2 sps, circular
/// alignment against the zero-stuffed reference, MMSE to one sample/symbol.
SymbolFrame rx_backend(DualPolWaveform two_sps, const ExperimentConfig& cfg,
                       const SymbolFrame& reference, std::size_t pilot_len,
                       RxChainInfo* info) {
    DualPolWaveform mf = matched_filter(two_sps, cfg.symbol_rate, cfg.rrc_rolloff);

    cvec ref(mf.size(), cplx(0, 0));
    for (std::size_t k = 0; k < reference.size() && 2 * k < ref.size(); ++k)
        ref[2 * k] = reference.x[k];
    const int shift = find_alignment(mf.x, ref, int(mf.size() / 2 - 1));
    if (shift != 0) {
        DualPolWaveform shifted = mf;
        const long n = long(mf.size());
        for (long i = 0; i < n; ++i) {
            const long src = ((i + shift) % n + n) % n;
            shifted.x[std::size_t(i)] = mf.x[std::size_t(src)];
            shifted.y[std::size_t(i)] = mf.y[std::size_t(src)];
        }
        mf = std::move(shifted);
    }
    if (info) info->alignment_shift = shift;

    const std::size_t skip = mf.guard / 2 + std::size_t(cfg.mmse_taps);
    if (pilot_len == 0)
        pilot_len = skip + std::max<std::size_t>(3000, 20 * cfg.mmse_taps);
    pilot_len = std::min(reference.size(), pilot_len);
    MmseEqualizer eq = mmse_train(mf, reference, pilot_len, cfg.mmse_taps);
    if (info) info->mmse_training_mse = eq.training_mse;
    SymbolFrame rx1 = mmse_apply(eq, mf);
    rx1.guard = std::max(rx1.guard, std::size_t(cfg.memory_l)) + 64;
    return rx1;
}

} // namespace

SymbolFrame rx_linear_chain(const DualPolWaveform& rx_composite,
                            const ExperimentConfig& cfg, int channel,
                            const SymbolFrame& reference, RxChainInfo* info,
                            std::size_t pilot_len) {
    double cutoff, transition;
    extract_edges(cfg, cutoff, transition);
    DualPolWaveform ext = wdm_extract(rx_composite, channel, cfg.channel_count,
                                      cfg.grid_spacing_hz, 2.0 * cfg.symbol_rate,
                                      cutoff, transition);
    CdcSpec cdc;
    cdc.total_dispersion_ps_nm = cfg.dispersion_d * cfg.span_length_km * cfg.span_count;
    DualPolWaveform lin = cdc_compensate(ext, cdc);
    lin.guard += cd_wrap_guard(cfg, lin.sample_rate);
    return rx_backend(std::move(lin), cfg, reference, pilot_len, info);
}

SymbolFrame rx_dbp_chain(const DualPolWaveform& rx_composite,
                         const ExperimentConfig& cfg, int channel,
                         const SymbolFrame& reference, double power_dbm,
                         RxChainInfo* info, std::size_t pilot_len) {
    double cutoff, transition;
    extract_edges(cfg, cutoff, transition);
    DualPolWaveform ext = wdm_extract(rx_composite, channel, cfg.channel_count,
                                      cfg.grid_spacing_hz, 2.0 * cfg.symbol_rate,
                                      cutoff, transition);
    DbpConfig dbp;
    dbp.step_km = cfg.dbp_step_km;
    dbp.alpha_db_km = cfg.alpha_db_km;
    dbp.gamma = cfg.gamma_w_km * 1e-3;
    dbp.dispersion_D = cfg.dispersion_d;
    dbp.span_count = cfg.span_count;
    dbp.span_length_km = cfg.span_length_km;
    dbp.launch_power_w = dbm_to_watt(power_dbm);
    DualPolWaveform bp = dbp_backpropagate(ext, dbp);
    bp.guard += cd_wrap_guard(cfg, bp.sample_rate);
    return rx_backend(std::move(bp), cfg, reference, pilot_len, info);
}

CouplingMatrix experiment_matrix(const ExperimentConfig& cfg) {
    RrcFilterSpec pulse = tx_pulse_spec(cfg);
    const LinkConfig link = cfg.make_link(cfg.power_start_dbm, 0);
    return generate_coupling_matrix(link, pulse, cfg.symbol_rate, cfg.memory_l,
                                    cfg.cutoff_db, cfg.coupling_quad_points);
}

SchemeSpec parse_scheme(const std::string& s) {
    SchemeSpec spec;
    spec.label = s;
    std::string base = s;
    const auto plus = s.find("+rls");
    if (plus != std::string::npos) {
        spec.rls = true;
        base = s.substr(0, plus);
    }
    if (base == "dbp") {
        spec.dbp = true;
        spec.kind = SchemeKind::kNone;
        if (spec.rls) throw ConfigError("scheme: dbp+rls is not a configuration");
        return spec;
    }
    spec.kind = scheme_from_name(base);
    return spec;
}

std::vector<MetricRecord> process_cell(const ExperimentConfig& cfg,
                                       const CouplingMatrix& base_matrix,
                                       double power_dbm, uint64_t seed,
                                       const std::string* export_dir) {
    const LdpcCode code = LdpcCode::from_rate(cfg.code_rate_num, cfg.code_rate_den);
    const QamConstellation constellation = QamConstellation::make(cfg.qam_order);

    std::vector<ChannelTx> tx;
    DualPolWaveform composite =
        build_composite(cfg, seed, power_dbm, code, constellation, &tx);
    const LinkConfig link =
        cfg.make_link(power_dbm, fnv1a64_u64(seed, fnv1a64("link-ase")));
    DualPolWaveform rx_composite = propagate_link(composite, link);

    std::vector<MetricRecord> records;
    for (int ch : cfg.resolved_rx_channels()) {
        const SymbolFrame& truth = tx[std::size_t(ch)].frame;

        FrameCoding coding;
        coding.code = &code;
        coding.constellation = &constellation;
        coding.interleaver = make_interleaver(constellation);
        coding.tx_info_bits = tx[std::size_t(ch)].info_bits;

        // Linear front end shared by all perturbation schemes.
        SymbolFrame rx1 = rx_linear_chain(rx_composite, cfg, ch, truth);
        CouplingMatrix matrix = base_matrix;
        matrix.p0 = dbm_to_watt(power_dbm) * pulse_peak_factor(tx_pulse_spec(cfg));
        matrix.scale_calibration = 1.0;
        calibrate_scale(matrix, rx1, truth);

        std::optional<SymbolFrame> rx_dbp; // built on demand
        for (const auto& scheme_str : cfg.schemes) {
            const SchemeSpec spec = parse_scheme(scheme_str);
            SchemeConfig sc;
            sc.scheme = spec.kind;
            sc.rls_enabled = spec.rls;
            sc.max_turbo_iters = cfg.max_turbo_iters;
            sc.ldpc_iters = cfg.ldpc_iters;
            sc.include_c00_phase = cfg.include_c00_phase;
            sc.demap_posterior_priors = cfg.demap_posterior_priors;
            sc.rls.num_taps = cfg.rls_taps;
            sc.rls.lambda = cfg.rls_lambda;

            const SymbolFrame* input = &rx1;
            if (spec.dbp) {
                if (!rx_dbp)
                    rx_dbp = rx_dbp_chain(rx_composite, cfg, ch, truth, power_dbm);
                input = &*rx_dbp;
                sc.scheme = SchemeKind::kNone; // DBP replaces NLC entirely
            }
            const SchemeResult res = run_scheme(*input, truth, matrix, coding, sc);

            const auto& last = res.trace.iters.back();
            MetricRecord rec;
            rec.launch_power_dbm = power_dbm;
            rec.scheme = spec.label;
            rec.channel_index = ch;
            rec.snr_x_db = last.snr_x_db;
            rec.snr_y_db = last.snr_y_db;
            rec.snr_avg_db = 0.5 * (last.snr_x_db + last.snr_y_db);
            rec.pre_fec_ber = last.pre_fec_ber;
            rec.post_fec_ber = last.post_fec_ber;
            rec.bit_count = truth.source_bits.size();
            rec.q2_db = q2_or_bound(last.pre_fec_ber, rec.bit_count);
            rec.iterations_used = res.trace.iterations_used;
            rec.seed = seed;
            records.push_back(std::move(rec));
        }

        if (export_dir) {
            fs::create_directories(*export_dir);
            std::ostringstream base;
            base << *export_dir << "/wave_p" << power_dbm << "_s" << seed << "_ch" << ch;
            write_dpwf(base.str() + ".dpwf", rx_composite,
                       watt_to_dbm(rx_composite.mean_power()));
            std::ofstream bits(base.str() + ".sym_bits", std::ios::binary);
            bits.write(reinterpret_cast<const char*>(truth.source_bits.data()),
                       std::streamsize(truth.source_bits.size()));
            std::ofstream info(base.str() + ".info_bits", std::ios::binary);
            info.write(reinterpret_cast<const char*>(coding.tx_info_bits.data()),
                       std::streamsize(coding.tx_info_bits.size()));
            json side;
            side["config"] = json::parse(cfg.canonical_json());
            side["power_dbm"] = power_dbm;
            side["seed"] = seed;
            side["channel_index"] = ch;
            side["truth_symbol_bits_file"] = base.str() + ".sym_bits";
            side["truth_info_bits_file"] = base.str() + ".info_bits";
            std::ofstream sj(base.str() + ".json");
            sj << side.dump(2) << "\n";
        }
    }
    return records;
}

namespace {

std::string cell_filename(double power, uint64_t seed) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "cell_p%+.3f_s%llu.txt", power,
                  static_cast<unsigned long long>(seed));
    return buf;
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg, int workers) {
    cfg.validate();
    const fs::path out_dir = cfg.output_dir;
    const fs::path cells_dir = out_dir / "cells";
    fs::create_directories(cells_dir);

    const auto powers = cfg.launch_powers();
    struct Cell {
        double power;
        uint64_t seed;
    };
    std::vector<Cell> cells;
    for (double p : powers)
        for (uint64_t s : cfg.seeds) cells.push_back({p, s});

    ExperimentSummary summary;
    const CouplingMatrix matrix = experiment_matrix(cfg);

    std::atomic<std::size_t> next{0};
    std::mutex mtx;
    std::vector<std::string> failures;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            const fs::path cell_path = cells_dir / cell_filename(cell.power, cell.seed);
            if (fs::exists(cell_path)) {
                std::lock_guard<std::mutex> lock(mtx);
                ++summary.skipped;
                continue;
            }
            try {
                const std::string exp_dir = (out_dir / "waveforms").string();
                const auto recs = process_cell(cfg, matrix, cell.power, cell.seed,
                                               cfg.export_waveforms ? &exp_dir : nullptr);
                const fs::path tmp = cell_path.string() + ".tmp";
                {
                    std::ofstream f(tmp);
                    for (const auto& r : recs) f << r.to_line() << "\n";
                }
                fs::rename(tmp, cell_path);
                std::lock_guard<std::mutex> lock(mtx);
                ++summary.completed;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mtx);
                ++summary.failed;
                failures.push_back(cell_filename(cell.power, cell.seed) + ": " + e.what());
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Deterministic merge in cell order.
    const fs::path records_path = out_dir / "records.txt";
    {
        std::ofstream rec(records_path);
        rec << "# " << MetricRecord::header() << "\n";
        for (const Cell& cell : cells) {
            const fs::path cell_path = cells_dir / cell_filename(cell.power, cell.seed);
            std::ifstream in(cell_path);
            if (!in) continue;
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty()) {
                    summary.records.push_back(MetricRecord::from_line(line));
                    rec << line << "\n";
                }
            }
        }
    }
    summary.records_path = records_path.string();

    json manifest;
    manifest["version"] = version_string();
    manifest["config_hash"] = cfg.config_hash();
    manifest["config"] = json::parse(cfg.canonical_json());
    manifest["seeds"] = cfg.seeds;
    manifest["powers"] = powers;
    manifest["completed"] = summary.completed;
    manifest["skipped"] = summary.skipped;
    manifest["failed"] = summary.failed;
    manifest["failures"] = failures;
    manifest["timestamp"] = std::time(nullptr);
    std::ofstream mf(out_dir / "manifest.json");
    mf << manifest.dump(2) << "\n";
    return summary;
}

std::vector<MetricRecord> ingest_waveform(const std::string& dpwf_path,
                                          const std::string& sidecar_path,
                                          std::vector<std::string>* status) {
    const DpwfFile file = read_dpwf(dpwf_path);

    std::ifstream sj(sidecar_path);
    if (!sj) throw IngestError("ingest: cannot open sidecar: " + sidecar_path);
    json side;
    try {
        sj >> side;
    } catch (const json::exception& e) {
        throw IngestError(std::string("ingest: sidecar parse error: ") + e.what());
    }
    if (!side.contains("config")) throw IngestError("ingest: sidecar missing config");
    ExperimentConfig cfg = ExperimentConfig::from_json_text(side["config"].dump());
    const double power_dbm = side.value("power_dbm", 0.0);
    const uint64_t seed = side.value("seed", uint64_t(0));
    const int ch = side.value("channel_index", cfg.channel_count / 2);

    const LdpcCode code = LdpcCode::from_rate(cfg.code_rate_num, cfg.code_rate_den);
    const QamConstellation constellation = QamConstellation::make(cfg.qam_order);

    // Truth (full frame) or pilot prefix, for alignment and training.
    auto read_bits = [](const std::string& path) {
        std::ifstream bf(path, std::ios::binary);
        if (!bf) throw IngestError("ingest: cannot open bits file: " + path);
        return std::vector<uint8_t>((std::istreambuf_iterator<char>(bf)),
                                    std::istreambuf_iterator<char>());
    };
    SymbolFrame truth;     // empty when unavailable
    SymbolFrame reference; // truth or zero-padded pilot prefix
    std::vector<uint8_t> info_bits;
    std::size_t pilot_len = 0;
    bool have_truth = false;
    const std::size_t frame_syms = std::size_t(cfg.symbols_per_channel());
    if (side.contains("truth_symbol_bits_file")) {
        truth = map_symbols(read_bits(side["truth_symbol_bits_file"].get<std::string>()),
                            constellation, cfg.symbol_rate);
        reference = truth;
        have_truth = true;
        if (side.contains("truth_info_bits_file"))
            info_bits = read_bits(side["truth_info_bits_file"].get<std::string>());
    } else if (side.contains("pilot_symbol_bits_file")) {
        SymbolFrame pilots =
            map_symbols(read_bits(side["pilot_symbol_bits_file"].get<std::string>()),
                        constellation, cfg.symbol_rate);
        pilot_len = pilots.size();
        reference = pilots;
        reference.x.resize(frame_syms, cplx(0, 0));
        reference.y.resize(frame_syms, cplx(0, 0));
    } else {
        throw IngestError("ingest: sidecar must provide truth or pilot bits");
    }

    FrameCoding coding;
    coding.code = &code;
    coding.constellation = &constellation;
    coding.interleaver = make_interleaver(constellation);
    coding.tx_info_bits = info_bits;

    SymbolFrame rx1 = rx_linear_chain(file.wave, cfg, ch, reference, nullptr, pilot_len);
    CouplingMatrix matrix = experiment_matrix(cfg);
    matrix.p0 = dbm_to_watt(power_dbm) * pulse_peak_factor(tx_pulse_spec(cfg));
    if (have_truth) {
        calibrate_scale(matrix, rx1, truth);
    } else if (side.contains("matrix_scale")) {
        matrix.scale_calibration = {side["matrix_scale"][0].get<double>(),
                                    side["matrix_scale"][1].get<double>()};
        if (status) status->push_back("calibration: using sidecar matrix_scale");
    } else if (status) {
        status->push_back("calibration: skipped (no truth); scale of 1 assumed");
    }

    std::vector<MetricRecord> records;
    for (const auto& scheme_str : cfg.schemes) {
        const SchemeSpec spec = parse_scheme(scheme_str);
        if (spec.dbp) {
            if (status) status->push_back("dbp: skipped in ingest mode");
            continue;
        }
        if (spec.kind == SchemeKind::kGenie && !have_truth) {
            if (status)
                status->push_back("genie: refused, sidecar provides no truth bits");
            continue;
        }
        SchemeConfig sc;
        sc.scheme = spec.kind;
        sc.rls_enabled = spec.rls;
        sc.max_turbo_iters = cfg.max_turbo_iters;
        sc.ldpc_iters = cfg.ldpc_iters;
        sc.include_c00_phase = cfg.include_c00_phase;
        sc.demap_posterior_priors = cfg.demap_posterior_priors;
        sc.rls.num_taps = cfg.rls_taps;
        sc.rls.lambda = cfg.rls_lambda;
        const SchemeResult res = run_scheme(rx1, truth, matrix, coding, sc);
        const auto& last = res.trace.iters.back();
        MetricRecord rec;
        rec.launch_power_dbm = power_dbm;
        rec.scheme = spec.label;
        rec.channel_index = ch;
        if (have_truth) {
            rec.snr_x_db = last.snr_x_db;
            rec.snr_y_db = last.snr_y_db;
            rec.pre_fec_ber = last.pre_fec_ber;
            rec.post_fec_ber = last.post_fec_ber;
            rec.bit_count = truth.source_bits.size();
            rec.q2_db = q2_or_bound(last.pre_fec_ber, rec.bit_count);
        } else {
            // decision-directed estimate; no BER without truth
            const SymbolFrame hd = hard_decide(res.final_frame, constellation);
            double sp = 0.0, ep = 0.0;
            const std::size_t g = res.final_frame.guard;
            for (std::size_t k = g; k + g < res.final_frame.size(); ++k) {
                sp += std::norm(hd.x[k]) + std::norm(hd.y[k]);
                ep += std::norm(res.final_frame.x[k] - hd.x[k]) +
                      std::norm(res.final_frame.y[k] - hd.y[k]);
            }
            rec.snr_x_db = rec.snr_y_db = lin_to_db(sp / std::max(ep, 1e-300));
            rec.pre_fec_ber = rec.post_fec_ber = std::nan("");
            rec.q2_db = std::nan("");
            rec.bit_count = 2 * std::size_t(constellation.bits_per_symbol()) *
                            res.final_frame.size();
        }
        rec.snr_avg_db = 0.5 * (rec.snr_x_db + rec.snr_y_db);
        rec.iterations_used = res.trace.iterations_used;
        rec.seed = seed;
        records.push_back(std::move(rec));
    }
    return records;
}

std::string emit_plotdata(const std::string& records_path,
                          const std::string& figure_spec_path,
                          std::vector<std::string>* warnings) {
    std::ifstream rf(records_path);
    if (!rf) throw ConfigError("plotdata: cannot open records: " + records_path);
    std::vector<MetricRecord> records;
    std::string line;
    while (std::getline(rf, line)) {
        if (line.empty() || line[0] == '#') continue;
        records.push_back(MetricRecord::from_line(line));
    }
    if (records.empty()) throw ConfigError("plotdata: empty record selection");

    std::ifstream sf(figure_spec_path);
    if (!sf) throw ConfigError("plotdata: cannot open figure spec: " + figure_spec_path);
    json spec;
    sf >> spec;
    const std::string panel = spec.value("panel", std::string("snr_vs_power"));
    std::vector<std::string> schemes;
    if (spec.contains("schemes"))
        schemes = spec["schemes"].get<std::vector<std::string>>();
    else {
        for (const auto& r : records)
            if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end())
                schemes.push_back(r.scheme);
    }
    const std::string out_path =
        spec.value("out", records_path + "." + panel + ".table.txt");

    auto metric_of = [&](const MetricRecord& r) -> double {
        if (panel == "snr_vs_power") return r.snr_avg_db;
        if (panel == "prefec_ber_vs_power") return r.pre_fec_ber;
        if (panel == "postfec_ber_vs_power") return r.post_fec_ber;
        if (panel == "q2_vs_channel" || panel == "q2_vs_power") return r.q2_db;
        throw ConfigError("plotdata: unknown panel: " + panel);
    };
    const bool per_channel = panel == "q2_vs_channel";

    // Drop schemes with no records at all.
    std::vector<std::string> present;
    for (const auto& s : schemes) {
        bool found = false;
        for (const auto& r : records)
            if (r.scheme == s) {
                found = true;
                break;
            }
        if (found)
            present.push_back(s);
        else if (warnings)
            warnings->push_back("scheme '" + s + "' missing from results; column omitted");
    }

    // x -> scheme -> samples
    std::map<double, std::map<std::string, std::vector<double>>> table;
    if (!per_channel) {
        for (const auto& r : records)
            table[r.launch_power_dbm][r.scheme].push_back(metric_of(r));
    } else {
        // per channel: best-over-power of the per-power seed means
        std::map<int, std::map<std::string, std::map<double, std::vector<double>>>> by_ch;
        for (const auto& r : records)
            by_ch[r.channel_index][r.scheme][r.launch_power_dbm].push_back(metric_of(r));
        for (const auto& [ch, by_scheme] : by_ch) {
            for (const auto& [scheme, by_power] : by_scheme) {
                double best = -1e300;
                const std::vector<double>* best_samples = nullptr;
                for (const auto& [pw, samples] : by_power) {
                    double mean = 0.0;
                    for (double v : samples) mean += v;
                    mean /= double(samples.size());
                    if (mean > best) {
                        best = mean;
                        best_samples = &samples;
                    }
                }
                if (best_samples) table[double(ch)][scheme] = *best_samples;
            }
        }
    }

    std::ofstream out(out_path);
    out << "# " << (per_channel ? "channel" : "launch_power_dbm");
    for (const auto& s : present) out << " " << s << "_mean " << s << "_ci95";
    out << "\n";
    out.precision(8);
    for (const auto& [x, by_scheme] : table) {
        out << x;
        for (const auto& s : present) {
            auto it = by_scheme.find(s);
            if (it == by_scheme.end() || it->second.empty()) {
                out << " nan nan";
                continue;
            }
            const auto& v = it->second;
            double mean = 0.0;
            for (double e : v) mean += e;
            mean /= double(v.size());
            double var = 0.0;
            for (double e : v) var += (e - mean) * (e - mean);
            var = v.size() > 1 ? var / double(v.size() - 1) : 0.0;
            const double ci = 1.96 * std::sqrt(var / double(v.size()));
            out << " " << mean << " " << ci;
        }
        out << "\n";
    }
    return out_path;
}

} // namespace nlcsim
