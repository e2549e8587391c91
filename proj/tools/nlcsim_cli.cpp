// Command-line front end: simulate / ingest / gen-matrix / plotdata.
// Exit codes: 0 success, 1 config error, 2 runtime failure, 3 partial completion.

#include "nlcsim/harness.hpp"
#include "nlcsim/waveform_io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace nlcsim;

struct CommonOpts {
    std::vector<uint64_t> seeds;
    std::vector<double> powers;
    std::vector<std::string> schemes;
    std::string out;
    std::string preset;
    int workers = 1;
};

void apply_common(ExperimentConfig& cfg, const CommonOpts& o) {
    if (!o.preset.empty()) {
        ExperimentConfig p = ExperimentConfig::preset_by_name(o.preset);
        // keep sweep/seed/scheme/output settings from the file
        p.power_start_dbm = cfg.power_start_dbm;
        p.power_stop_dbm = cfg.power_stop_dbm;
        p.power_step_dbm = cfg.power_step_dbm;
        p.seeds = cfg.seeds;
        p.schemes = cfg.schemes;
        p.output_dir = cfg.output_dir;
        p.export_waveforms = cfg.export_waveforms;
        cfg = p;
    }
    if (!o.seeds.empty()) cfg.seeds = o.seeds;
    if (!o.powers.empty()) {
        cfg.power_start_dbm = o.powers.front();
        cfg.power_stop_dbm = o.powers.back();
        cfg.power_step_dbm = o.powers.size() > 1
                                 ? (o.powers.back() - o.powers.front()) /
                                       double(o.powers.size() - 1)
                                 : 0.0;
    }
    if (!o.schemes.empty()) cfg.schemes = o.schemes;
    if (!o.out.empty()) cfg.output_dir = o.out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"WDM nonlinearity-compensation simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string config_path, dpwf_path, sidecar_path, records_path, spec_path,
        matrix_out = "coupling_matrix.txt";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", opts.seeds, "seed list override");
        cmd->add_option("--power", opts.powers, "launch power override (dBm)");
        cmd->add_option("--scheme", opts.schemes, "scheme subset override");
        cmd->add_option("--out", opts.out, "output directory override");
        cmd->add_option("--workers", opts.workers, "worker threads");
        cmd->add_option("--preset", opts.preset, "preset name override");
    };

    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo sweep");
    sim->add_option("config", config_path, "JSON experiment config")->required();
    add_common(sim);

    auto* ing = app.add_subcommand("ingest", "process a recorded DPWF waveform");
    ing->add_option("file", dpwf_path, "DPWF waveform file")->required();
    ing->add_option("config", sidecar_path, "JSON sidecar with metadata")->required();
    add_common(ing);

    auto* gen = app.add_subcommand("gen-matrix", "export the coupling matrix");
    gen->add_option("config", config_path, "JSON experiment config")->required();
    gen->add_option("--out", matrix_out, "output path");
    add_common(gen);

    auto* plot = app.add_subcommand("plotdata", "aggregate records into plot tables");
    plot->add_option("results", records_path, "records.txt from a run")->required();
    plot->add_option("spec", spec_path, "JSON figure spec")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
            apply_common(cfg, opts);
            cfg.validate();
            const ExperimentSummary s = run_experiment(cfg, opts.workers);
            std::cout << "completed " << s.completed << " cells, skipped " << s.skipped
                      << ", failed " << s.failed << "\nrecords: " << s.records_path
                      << "\n";
            if (s.failed > 0) return s.completed > 0 ? 3 : 2;
            return 0;
        }
        if (ing->parsed()) {
            std::vector<std::string> status;
            const auto records = ingest_waveform(dpwf_path, sidecar_path, &status);
            for (const auto& st : status) std::cerr << "status: " << st << "\n";
            std::cout << "# " << MetricRecord::header() << "\n";
            for (const auto& r : records) std::cout << r.to_line() << "\n";
            return 0;
        }
        if (gen->parsed()) {
            ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
            apply_common(cfg, opts);
            const CouplingMatrix m = experiment_matrix(cfg);
            m.save(matrix_out);
            std::cout << "retained " << m.retained_count() << " coefficients -> "
                      << matrix_out << "\n";
            return 0;
        }
        if (plot->parsed()) {
            std::vector<std::string> warnings;
            const std::string out = emit_plotdata(records_path, spec_path, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            std::cout << "table: " << out << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
