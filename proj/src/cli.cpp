// SPDX-License-Identifier: Apache-2.0
//
// beamsec: attack injection and detection for beamformed massive-MIMO links
// Copyright (C) 2026 The beamsec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamsec/cli.hpp"

#include "beamsec/config.hpp"
#include "beamsec/errors.hpp"
#include "beamsec/output.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>

namespace beamsec
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Common
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "beamsec-out";
    std::optional<std::size_t> runs;
};

struct Context
{
    std::string command;
    Common opts;
    Config cfg;
    std::ostream &out;
    fs::path dir;
    ordered_json outputs = ordered_json::array();

    void add_output(const std::string &name)
    {
        outputs.push_back({{"file", name}, {"sha256", sha256_file(dir / name)}});
    }

    void write_manifest(std::uint64_t seed, ordered_json calibration = ordered_json::object())
    {
        ordered_json m;
        m["manifest_version"] = 1;
        m["tool"] = "beamsec";
        m["tool_version"] = tool_version();
        m["command"] = command;
        m["seed"] = seed;
        m["config"] = config_to_json(cfg);
        m["calibration"] = std::move(calibration);
        m["outputs"] = outputs;
        write_text(dir / "manifest.json", m.dump(2) + "\n");
        out << "wrote " << (dir / "manifest.json").string() << "\n";
    }
};

std::string f(const char *format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

void cmd_sweep(Context &c)
{
    if (c.opts.seed)
        c.cfg.sweep.seed = *c.opts.seed;
    if (c.opts.runs)
        c.cfg.sweep.n_channels = *c.opts.runs;
    const RateSweepResult r = run_rate_sweep(c.cfg.sweep);

    std::string csv = "degradation,mean_rate_clean,mean_rate_attacked,reduction_pct,closed_form_pct\n";
    c.out << "mean realized SNR " << f("%.2f", r.mean_snr_db) << " dB over " << c.cfg.sweep.n_channels
          << " channels\n";
    c.out << "degradation  clean_rate  attacked_rate  reduction_%  closed_form_%\n";
    for (const RateSweepRow &row : r.rows)
    {
        c.out << f("%10.0f%%", 100.0 * row.degradation) << f("  %10.4f", row.mean_rate_clean)
              << f("  %13.4f", row.mean_rate_attacked) << f("  %11.2f", row.reduction_pct)
              << f("  %13.2f", row.closed_form_pct) << "\n";
        csv += f("%.6g", row.degradation) + "," + f("%.6g", row.mean_rate_clean) + "," +
               f("%.6g", row.mean_rate_attacked) + "," + f("%.6g", row.reduction_pct) + "," +
               f("%.6g", row.closed_form_pct) + "\n";
    }
    write_text(c.dir / "sweep.csv", csv);
    c.add_output("sweep.csv");
    c.write_manifest(c.cfg.sweep.seed);
}

void cmd_detect_eval(Context &c, const std::string &method)
{
    if (c.opts.seed)
    {
        c.cfg.cusum.seed = *c.opts.seed;
        c.cfg.ks.seed = *c.opts.seed;
    }
    if (c.opts.runs)
    {
        c.cfg.cusum.n_runs = *c.opts.runs;
        c.cfg.ks.n_episodes = *c.opts.runs;
    }
    ordered_json report;
    if (method == "cusum" || method == "all")
    {
        const CusumExperiment exp(c.cfg.cusum);
        const std::uint64_t s = c.cfg.cusum.seed;
        const CusumEvaluation ev = exp.evaluate(s * 3, s * 3 + 1, c.cfg.cusum.n_h0_runs, c.cfg.cusum.n_runs);
        c.out << "GLR-CUSUM: rho " << f("%.6g", c.cfg.cusum.rho) << ", " << c.cfg.cusum.n_runs << " runs of "
              << c.cfg.cusum.min_samples << ".." << c.cfg.cusum.max_samples << " samples\n";
        c.out << "  detection probability " << f("%.4f", ev.pooled_detection) << ", false-positive rate "
              << f("%.4f", ev.pooled_false_positive) << "\n";
        std::string csv = "n_samples,threshold,false_positive_rate,detection_probability\n";
        for (const RocPoint &p : ev.per_length)
            csv += std::to_string(p.n_samples_used) + "," + f("%.6g", p.threshold) + "," +
                   f("%.6g", p.false_positive_rate) + "," + f("%.6g", p.detection_probability) + "\n";
        write_text(c.dir / "cusum_roc.csv", csv);
        c.add_output("cusum_roc.csv");
        report["cusum"] = {{"rho", c.cfg.cusum.rho},
                           {"detection_probability", ev.pooled_detection},
                           {"false_positive_rate", ev.pooled_false_positive},
                           {"thresholds", ev.thresholds}};
    }
    if (method == "ks" || method == "all")
    {
        const KsExperiment exp(c.cfg.ks);
        c.out << "KS: delta " << f("%.6g", c.cfg.ks.delta) << " rad, alpha " << f("%.3g", c.cfg.ks.alpha) << ", "
              << c.cfg.ks.n_episodes << " episodes\n";
        ordered_json pts = ordered_json::array();
        for (double miss : {0.1, 0.2})
        {
            const SampleSizeResult r = exp.min_samples_for_miss(miss, c.cfg.ks.delta);
            c.out << "  miss <= " << f("%.2f", miss) << ": m_min " << r.m_min << " (miss " << f("%.3f", r.miss_at_m)
                  << ", detection " << f("%.3f", r.detection_at_m) << ")\n";
            pts.push_back({{"miss_target", miss},
                           {"m_min", r.m_min},
                           {"miss", r.miss_at_m},
                           {"detection_probability", r.detection_at_m}});
        }
        report["ks"] = {{"delta", c.cfg.ks.delta}, {"alpha", c.cfg.ks.alpha}, {"sample_size", pts}};
    }
    write_text(c.dir / "detect_eval.json", report.dump(2) + "\n");
    c.add_output("detect_eval.json");
    c.write_manifest(c.cfg.cusum.seed);
}

void cmd_scenario(Context &c, bool plot)
{
    if (c.opts.seed)
        c.cfg.scenario.rng_seed = *c.opts.seed;
    const std::size_t runs = c.opts.runs.value_or(1);
    const std::uint64_t base = c.cfg.scenario.rng_seed;
    std::size_t wins = 0;
    for (std::size_t i = 0; i < runs; ++i)
    {
        ScenarioConfig sc = c.cfg.scenario;
        sc.rng_seed = derive_seed(base, i);
        const MetricsLog log = run(sc);
        const ScenarioSummary s = summarize(log);
        c.out << "seed " << sc.rng_seed << ": detection " << (sc.detection.enabled ? to_string(sc.detection.detector) : "off")
              << ", throughput " << f("%.3f", s.mean_rate) << " pkt/slot, latency " << f("%.3f", s.mean_latency)
              << ", post-onset latency " << f("%.3f", s.post_onset_latency) << ", drops " << f("%.4f", s.drop_rate)
              << ", detection delay " << f("%.2f", s.detection_delay) << "\n";
        if (!plot)
        {
            if (i == 0)
            {
                write_metrics(log, c.dir / "metrics.csv");
                c.add_output("metrics.csv");
            }
            continue;
        }
        ScenarioConfig off = sc;
        off.detection.enabled = !sc.detection.enabled;
        const MetricsLog other = run(off);
        const MetricsLog &on_log = sc.detection.enabled ? log : other;
        const MetricsLog &off_log = sc.detection.enabled ? other : log;
        const ScenarioSummary son = summarize(on_log);
        const ScenarioSummary soff = summarize(off_log);
        c.out << "  post-onset latency with detection " << f("%.3f", son.post_onset_latency) << ", without "
              << f("%.3f", soff.post_onset_latency) << "\n";
        wins += son.post_onset_latency < soff.post_onset_latency ? 1 : 0;
        if (i == 0)
        {
            write_metrics(on_log, c.dir / "metrics_detection_on.csv");
            write_metrics(off_log, c.dir / "metrics_detection_off.csv");
            PlotOptions po;
            po.title = "Packet latency with and without attack detection";
            po.y_label = "latency [slots]";
            emit_plot({{"detection enabled", latency_series(on_log)}, {"detection disabled", latency_series(off_log)}},
                      c.dir / "latency.svg", po);
            c.add_output("metrics_detection_on.csv");
            c.add_output("metrics_detection_off.csv");
            c.add_output("latency.svg");
        }
    }
    if (plot)
        c.out << "detection lowered post-onset latency on " << wins << " of " << runs << " seeds\n";
    c.write_manifest(base);
}

void cmd_export(Context &c)
{
    if (c.opts.seed)
        c.cfg.dataset.seed = *c.opts.seed;
    if (c.opts.runs)
        c.cfg.dataset.n_records = *c.opts.runs;
    const std::size_t n = export_dataset(c.cfg.dataset, c.dir / "dataset.csid");
    c.add_output("dataset.csid");
    c.out << "wrote " << n << " records to " << (c.dir / "dataset.csid").string() << "\n";
    c.out << "sha256 " << c.outputs.back()["sha256"].get<std::string>() << "\n";
    c.write_manifest(c.cfg.dataset.seed);
}

void cmd_calibrate(Context &c)
{
    if (c.opts.seed)
    {
        c.cfg.cusum.seed = *c.opts.seed;
        c.cfg.ks.seed = *c.opts.seed;
    }
    if (c.opts.runs)
    {
        c.cfg.cusum.n_runs = *c.opts.runs;
        c.cfg.ks.n_episodes = *c.opts.runs;
    }
    const double delta = fit_delta(c.cfg.ks);
    c.out << "KS phase-spoof magnitude: " << f("%.6f", delta) << " rad (miss " << f("%.2f", c.cfg.ks.fit_miss)
          << " at m = " << c.cfg.ks.fit_m << ")\n";
    const double rho = fit_rho(c.cfg.cusum);
    c.out << "GLR-CUSUM fading correlation: " << f("%.6f", rho) << " (target detection "
          << f("%.2f", c.cfg.cusum.target_detection) << ")\n";
    c.cfg.ks.delta = delta;
    c.cfg.cusum.rho = rho;
    const std::uint64_t s = c.cfg.cusum.seed;
    const CusumEvaluation ev =
        CusumExperiment(c.cfg.cusum).evaluate(s * 3, s * 3 + 1, c.cfg.cusum.n_h0_runs, c.cfg.cusum.n_runs);
    c.out << "  held-out detection " << f("%.4f", ev.pooled_detection) << ", false-positive rate "
          << f("%.4f", ev.pooled_false_positive) << "\n";
    ordered_json cal;
    cal["ks_delta"] = delta;
    cal["cusum_rho"] = rho;
    cal["cusum_thresholds"] = ev.thresholds;
    cal["cusum_threshold_lengths"] = {c.cfg.cusum.min_samples, c.cfg.cusum.max_samples};
    cal["cusum_detection"] = ev.pooled_detection;
    cal["cusum_false_positive_rate"] = ev.pooled_false_positive;
    c.write_manifest(s, cal);
}

} // namespace

std::string tool_version()
{
    return BEAMSEC_VERSION;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Attack injection and detection experiments for beamformed massive-MIMO links", "beamsec"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    Common opts;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opts.config_path, "JSON configuration or manifest");
        sub->add_option("--seed", opts.seed, "base seed");
        sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
        sub->add_option("--runs", opts.runs, "Monte-Carlo size override")->check(CLI::PositiveNumber);
    };
    CLI::App *sweep = app.add_subcommand("sweep-snr", "rate-degradation table for the coding attack");
    CLI::App *detect = app.add_subcommand("detect-eval", "detection probability and sample-size analysis");
    CLI::App *scen = app.add_subcommand("scenario", "vehicle scenario with metrics and optional latency plot");
    CLI::App *exp = app.add_subcommand("export-dataset", "CSI dataset in the CSID format");
    CLI::App *cal = app.add_subcommand("calibrate", "fit attack magnitudes and detector thresholds");
    for (CLI::App *sub : {sweep, detect, scen, exp, cal})
        add_common(sub);
    std::string method = "all";
    detect->add_option("--method", method, "cusum, ks or all")
        ->check(CLI::IsMember({"cusum", "ks", "all"}))
        ->capture_default_str();
    bool plot = false;
    scen->add_flag("--plot", plot, "also run with detection toggled and plot latency");

    if (!args.empty() && !args.front().starts_with("-") && app.get_subcommand_no_throw(args.front()) == nullptr)
    {
        err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
        return exit_config;
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try
    {
        app.parse(rev);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::CallForVersion &)
    {
        out << tool_version() << "\n";
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_config;
    }

    CLI::App *chosen = app.get_subcommands().front();
    try
    {
        Context ctx{chosen->get_name(), opts, {}, out, opts.out_dir};
        if (!opts.config_path.empty())
            ctx.cfg = load_config(opts.config_path);
        fs::create_directories(ctx.dir);

        if (chosen == sweep)
            cmd_sweep(ctx);
        else if (chosen == detect)
            cmd_detect_eval(ctx, method);
        else if (chosen == scen)
            cmd_scenario(ctx, plot);
        else if (chosen == exp)
            cmd_export(ctx);
        else
            cmd_calibrate(ctx);
    }
    catch (const config_error &e)
    {
        err << "configuration error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}

} // namespace beamsec
