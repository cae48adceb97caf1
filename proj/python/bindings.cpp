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
#include "beamsec/dataset.hpp"
#include "beamsec/detection.hpp"
#include "beamsec/errors.hpp"
#include "beamsec/experiments.hpp"
#include "beamsec/output.hpp"
#include "beamsec/scenario.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <sstream>

namespace py = pybind11;
using namespace beamsec;

namespace
{

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

Config parse_config(const std::string &json_text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(json_text.empty() ? "{}" : json_text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw config_error("", std::string("invalid JSON: ") + e.what());
    }
    return config_from_json(doc);
}

FloatArray to_array(const std::vector<std::vector<float>> &rows, std::size_t a, std::size_t b)
{
    FloatArray out({rows.size(), a, b, std::size_t{2}});
    float *dst = out.mutable_data();
    const std::size_t n = a * b * 2;
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::memcpy(dst + i * n, rows[i].data(), n * sizeof(float));
    return out;
}

py::dict dataset_to_dict(const CsiDataset &ds)
{
    const DatasetShape &s = ds.shape;
    py::array_t<std::uint8_t> labels(ds.records.size());
    std::vector<std::vector<float>> y, hr, ht;
    for (std::size_t i = 0; i < ds.records.size(); ++i)
    {
        labels.mutable_data()[i] = ds.records[i].label;
        y.push_back(ds.records[i].y);
        hr.push_back(ds.records[i].h_reported);
        ht.push_back(ds.records[i].h_true);
    }
    py::dict d;
    d["n_ant"] = s.n_ant;
    d["n_sub"] = s.n_sub;
    d["n_pilot"] = s.n_pilot;
    d["label"] = labels;
    d["y"] = to_array(y, s.n_ant, s.n_pilot);
    d["h_reported"] = to_array(hr, s.n_ant, s.n_sub);
    d["h_true"] = to_array(ht, s.n_ant, s.n_sub);
    return d;
}

CsiDataset dataset_from_arrays(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> &label,
                               const FloatArray &y, const FloatArray &h_reported, const FloatArray &h_true)
{
    if (y.ndim() != 4 || h_reported.ndim() != 4 || h_true.ndim() != 4 || label.ndim() != 1)
        throw invalid_argument("expected label[N] and y, h_reported, h_true of shape [N, n_ant, *, 2]");
    CsiDataset ds;
    ds.shape = {static_cast<std::size_t>(h_true.shape(1)), static_cast<std::size_t>(h_true.shape(2)),
                static_cast<std::size_t>(y.shape(2))};
    const std::size_t n = static_cast<std::size_t>(label.shape(0));
    for (const FloatArray *a : {&y, &h_reported, &h_true})
        if (static_cast<std::size_t>(a->shape(0)) != n || a->shape(1) != h_true.shape(1) || a->shape(3) != 2)
            throw invalid_argument("array shapes disagree");
    const std::size_t ny = ds.shape.y_floats(), nh = ds.shape.h_floats();
    for (std::size_t i = 0; i < n; ++i)
    {
        CsiDatasetRecord r;
        r.label = label.data()[i];
        r.y.assign(y.data() + i * ny, y.data() + (i + 1) * ny);
        r.h_reported.assign(h_reported.data() + i * nh, h_reported.data() + (i + 1) * nh);
        r.h_true.assign(h_true.data() + i * nh, h_true.data() + (i + 1) * nh);
        ds.records.push_back(std::move(r));
    }
    return ds;
}

py::dict summary_to_dict(const ScenarioSummary &s)
{
    py::list vehicles;
    for (const VehicleSummary &v : s.vehicles)
    {
        py::dict d;
        d["vehicle_id"] = v.vehicle_id;
        d["mean_rate"] = v.mean_rate;
        d["mean_spectral_efficiency"] = v.mean_spectral_efficiency;
        d["mean_latency"] = v.mean_latency;
        d["drop_rate"] = v.drop_rate;
        d["post_onset_latency"] = v.post_onset_latency;
        d["onsets"] = v.onsets;
        d["detected"] = v.detected;
        d["detection_delay"] = v.detection_delay;
        d["delivered"] = v.delivered;
        d["dropped"] = v.dropped;
        vehicles.append(d);
    }
    py::dict d;
    d["vehicles"] = vehicles;
    d["mean_rate"] = s.mean_rate;
    d["mean_spectral_efficiency"] = s.mean_spectral_efficiency;
    d["mean_latency"] = s.mean_latency;
    d["post_onset_latency"] = s.post_onset_latency;
    d["drop_rate"] = s.drop_rate;
    d["detection_delay"] = s.detection_delay;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Beam-selection security simulator core";

    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<format_error>(m, "FormatError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const invalid_argument &e)
        {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
        catch (const io_error &e)
        {
            PyErr_SetString(PyExc_OSError, e.what());
        }
    });

    m.def("version", &tool_version);

    m.def("default_config", [] { return config_to_json(Config{}).dump(); },
          "Default configuration as JSON text.");
    m.def("normalize_config", [](const std::string &text) { return config_to_json(parse_config(text)).dump(); },
          py::arg("config_json"), "Validates a (partial) configuration and returns it with defaults filled in.");

    m.def(
        "rate_sweep",
        [](const std::string &text) {
            const RateSweepResult res = run_rate_sweep(parse_config(text).sweep);
            py::list rows;
            for (const RateSweepRow &r : res.rows)
            {
                py::dict d;
                d["degradation"] = r.degradation;
                d["mean_rate_clean"] = r.mean_rate_clean;
                d["mean_rate_attacked"] = r.mean_rate_attacked;
                d["reduction_pct"] = r.reduction_pct;
                d["closed_form_pct"] = r.closed_form_pct;
                rows.append(d);
            }
            py::dict out;
            out["rows"] = rows;
            out["mean_snr_db"] = res.mean_snr_db;
            return out;
        },
        py::arg("config_json") = "");

    m.def("closed_form_rate_reduction_pct", &closed_form_rate_reduction_pct, py::arg("snr_db"), py::arg("fraction"));

    m.def(
        "cusum_evaluate",
        [](const std::string &text, std::size_t n_h0, std::size_t n_h1) {
            const CusumExperimentConfig cfg = parse_config(text).cusum;
            const CusumEvaluation ev = CusumExperiment(cfg).evaluate(cfg.seed * 3, cfg.seed * 3 + 1,
                                                                     n_h0 ? n_h0 : cfg.n_h0_runs,
                                                                     n_h1 ? n_h1 : cfg.n_runs);
            py::dict d;
            d["pooled_detection"] = ev.pooled_detection;
            d["pooled_false_positive"] = ev.pooled_false_positive;
            d["thresholds"] = ev.thresholds;
            return d;
        },
        py::arg("config_json") = "", py::arg("n_h0") = 0, py::arg("n_h1") = 0);

    m.def(
        "ks_min_samples",
        [](const std::string &text, double miss_target) {
            const KsExperimentConfig cfg = parse_config(text).ks;
            const SampleSizeResult r = KsExperiment(cfg).min_samples_for_miss(miss_target, cfg.delta);
            py::dict d;
            d["m_min"] = r.m_min;
            d["miss"] = r.miss_at_m;
            d["detection"] = r.detection_at_m;
            return d;
        },
        py::arg("config_json") = "", py::arg("miss_target") = 0.1);

    m.def(
        "ks_statistic",
        [](const std::vector<double> &samples, double sigma_e2) {
            const CsiErrorModel model{sigma_e2};
            return ks_statistic(samples, [&](double x) { return model.magnitude_cdf(x); });
        },
        py::arg("samples"), py::arg("sigma_e2"), "KS distance of error magnitudes from the Rayleigh reference.");
    m.def("ks_critical_value", &ks_critical_value, py::arg("alpha"), py::arg("m"));

    py::class_<CusumState>(m, "Cusum")
        .def(py::init<double, double, std::size_t, double>(), py::arg("mu0"), py::arg("sigma0"), py::arg("window"),
             py::arg("threshold"))
        .def("update", &CusumState::update, py::arg("x"))
        .def("reset", &CusumState::reset)
        .def_property_readonly("statistic", &CusumState::statistic)
        .def_property_readonly("alarmed", &CusumState::alarmed)
        .def_property_readonly("count", &CusumState::count);

    m.def(
        "run_scenario",
        [](const std::string &text) { return format_metrics(run(parse_config(text).scenario)); },
        py::arg("config_json") = "", "Runs the scenario and returns the metrics log as CSV text.");
    m.def(
        "summarize_metrics", [](const std::string &csv) { return summary_to_dict(summarize(parse_metrics(csv))); },
        py::arg("metrics_csv"));

    m.def(
        "export_dataset",
        [](const std::string &text, const std::filesystem::path &path) {
            return export_dataset(parse_config(text).dataset, path);
        },
        py::arg("config_json"), py::arg("path"), "Generates the seeded dataset and writes it as CSID.");
    m.def(
        "read_dataset", [](const std::filesystem::path &path) { return dataset_to_dict(read_dataset(path)); },
        py::arg("path"));
    m.def(
        "write_dataset",
        [](const std::filesystem::path &path, const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> &label,
           const FloatArray &y, const FloatArray &h_reported, const FloatArray &h_true) {
            return write_dataset(dataset_from_arrays(label, y, h_reported, h_true), path);
        },
        py::arg("path"), py::arg("label"), py::arg("y"), py::arg("h_reported"), py::arg("h_true"));
    m.def("sha256_file", &sha256_file, py::arg("path"));

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out, err;
            const int rc = run_cli(args, out, err);
            return py::make_tuple(rc, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
