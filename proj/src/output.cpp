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

#include "beamsec/output.hpp"

#include "beamsec/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>
#include <sstream>

namespace beamsec
{

namespace
{

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string g6(double v)
{
    return fmt("%.6g", v);
}

std::string xml_escape(const std::string &s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// 1, 2 or 5 times a power of ten giving about `target` intervals.
double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

std::string to_hex(const unsigned char *md, unsigned int len)
{
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i)
    {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

} // namespace

std::string format_metrics(const MetricsLog &log)
{
    std::string out = metrics_header;
    out += '\n';
    char buf[256];
    for (const MetricsRow &r : log)
    {
        std::snprintf(buf, sizeof buf, "%lld,%zu,%.6g,%.6g,%llu,%llu,%llu,%.6g,%d,%d,%d\n",
                      static_cast<long long>(r.slot), r.vehicle_id, r.snr_db, r.rate,
                      static_cast<unsigned long long>(r.queued), static_cast<unsigned long long>(r.delivered),
                      static_cast<unsigned long long>(r.dropped), r.latency, r.attack_active ? 1 : 0,
                      r.alarm ? 1 : 0, r.identifying ? 1 : 0);
        out += buf;
    }
    return out;
}

void write_metrics(const MetricsLog &log, const std::filesystem::path &path)
{
    write_text(path, format_metrics(log));
}

MetricsLog parse_metrics(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != metrics_header)
        throw invalid_argument("parse_metrics: missing or unexpected header");
    MetricsLog log;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        MetricsRow r;
        long long slot = 0;
        unsigned long long q = 0, d = 0, dr = 0;
        int a = 0, al = 0, id = 0;
        int consumed = 0;
        if (std::sscanf(line.c_str(), "%lld,%zu,%lf,%lf,%llu,%llu,%llu,%lf,%d,%d,%d%n", &slot, &r.vehicle_id,
                        &r.snr_db, &r.rate, &q, &d, &dr, &r.latency, &a, &al, &id, &consumed) != 11 ||
            static_cast<std::size_t>(consumed) != line.size())
            throw invalid_argument("parse_metrics: malformed line " + std::to_string(lineno));
        r.slot = slot;
        r.queued = q;
        r.delivered = d;
        r.dropped = dr;
        r.attack_active = a != 0;
        r.alarm = al != 0;
        r.identifying = id != 0;
        log.push_back(r);
    }
    return log;
}

std::string render_svg(const std::vector<Series> &series, const PlotOptions &opt)
{
    if (series.empty())
        throw invalid_argument("emit_plot: no series");
    const std::size_t n = series.front().values.size();
    if (n == 0)
        throw invalid_argument("emit_plot: empty series");
    for (const Series &s : series)
    {
        if (s.values.size() != n)
            throw invalid_argument("emit_plot: series lengths differ");
        if (!std::all_of(s.values.begin(), s.values.end(), [](double v) { return std::isfinite(v); }))
            throw invalid_argument("emit_plot: non-finite value in " + s.name);
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Series &s : series)
        for (double v : s.values)
        {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi - lo < 1e-12)
    {
        lo -= 1.0;
        hi += 1.0;
    }
    const double ystep = nice_step(hi - lo, 5);
    lo = std::floor(lo / ystep) * ystep;
    hi = std::ceil(hi / ystep) * ystep;
    const double xmax = n > 1 ? static_cast<double>(n - 1) : 1.0;

    const double left = 70, right = 20, top = 40, bottom = 60;
    const double pw = opt.width - left - right;
    const double ph = opt.height - top - bottom;
    auto px = [&](double i) { return left + pw * i / xmax; };
    auto py = [&](double v) { return top + ph * (1.0 - (v - lo) / (hi - lo)); };
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::string o;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
         std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        o += "<text x=\"" + fmt("%.1f", opt.width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
             xml_escape(opt.title) + "</text>\n";

    // Axes, grid and ticks.
    o += "<g stroke=\"#888\" stroke-width=\"1\">\n";
    o += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.1f", top + ph) + "\" x2=\"" + fmt("%.1f", left + pw) +
         "\" y2=\"" + fmt("%.1f", top + ph) + "\"/>\n";
    o += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.1f", top) + "\" x2=\"" + fmt("%.1f", left) +
         "\" y2=\"" + fmt("%.1f", top + ph) + "\"/>\n";
    o += "</g>\n<g fill=\"#333\">\n";
    for (double v = lo; v <= hi + 0.5 * ystep; v += ystep)
    {
        const double y = py(v);
        o += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.1f", y) + "\" x2=\"" + fmt("%.1f", left + pw) +
             "\" y2=\"" + fmt("%.1f", y) + "\" stroke=\"#eee\"/>\n";
        o += "<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" + fmt("%.1f", y + 4) + "\" text-anchor=\"end\">" +
             g6(std::abs(v) < 1e-9 * ystep ? 0.0 : v) + "</text>\n";
    }
    const double xstep = nice_step(xmax, 8);
    for (double x = 0; x <= xmax + 1e-9; x += xstep)
        o += "<text x=\"" + fmt("%.1f", px(x)) + "\" y=\"" + fmt("%.1f", top + ph + 18) +
             "\" text-anchor=\"middle\">" + g6(x) + "</text>\n";
    o += "<text x=\"" + fmt("%.1f", left + pw / 2) + "\" y=\"" + fmt("%.1f", opt.height - 12.0) +
         "\" text-anchor=\"middle\">" + xml_escape(opt.x_label) + "</text>\n";
    o += "<text transform=\"translate(16 " + fmt("%.1f", top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + xml_escape(opt.y_label) + "</text>\n";
    o += "</g>\n";

    // Data.
    for (std::size_t k = 0; k < series.size(); ++k)
    {
        const char *color = palette[k % std::size(palette)];
        const auto &v = series[k].values;
        if (n == 1)
        {
            o += "<circle cx=\"" + fmt("%.2f", px(0)) + "\" cy=\"" + fmt("%.2f", py(v[0])) + "\" r=\"4\" fill=\"" +
                 color + "\"/>\n";
            continue;
        }
        o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < n; ++i)
        {
            if (i > 0)
                o += ' ';
            o += fmt("%.2f", px(static_cast<double>(i))) + "," + fmt("%.2f", py(v[i]));
        }
        o += "\"/>\n";
    }

    // Legend.
    for (std::size_t k = 0; k < series.size(); ++k)
    {
        const double y = top + 14 + 18.0 * static_cast<double>(k);
        const double x = left + pw - 190;
        o += "<line x1=\"" + fmt("%.1f", x) + "\" y1=\"" + fmt("%.1f", y - 4) + "\" x2=\"" + fmt("%.1f", x + 24) +
             "\" y2=\"" + fmt("%.1f", y - 4) + "\" stroke=\"" + palette[k % std::size(palette)] +
             "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + fmt("%.1f", x + 30) + "\" y=\"" + fmt("%.1f", y) + "\">" + xml_escape(series[k].name) +
             "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

void emit_plot(const std::vector<Series> &series, const std::filesystem::path &path, const PlotOptions &opt)
{
    write_text(path, render_svg(series, opt));
}

std::vector<double> latency_series(const MetricsLog &log)
{
    std::int64_t last = -1;
    for (const MetricsRow &r : log)
        last = std::max(last, r.slot);
    std::vector<double> sum(static_cast<std::size_t>(last + 1), 0.0);
    std::vector<double> count(sum.size(), 0.0);
    for (const MetricsRow &r : log)
    {
        sum[static_cast<std::size_t>(r.slot)] += r.latency * static_cast<double>(r.delivered);
        count[static_cast<std::size_t>(r.slot)] += static_cast<double>(r.delivered);
    }
    std::vector<double> out(sum.size(), 0.0);
    double carry = 0.0;
    for (std::size_t t = 0; t < out.size(); ++t)
    {
        if (count[t] > 0.0)
            carry = sum[t] / count[t];
        out[t] = carry;
    }
    return out;
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw io_error("cannot open " + path.string() + " for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f)
        throw io_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw io_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string sha256_hex(std::span<const std::uint8_t> bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    return to_hex(md, len);
}

std::string sha256_file(const std::filesystem::path &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw io_error("cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
    std::vector<char> buf(1 << 16);
    while (f)
    {
        f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (f.gcount() > 0)
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(f.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    return to_hex(md, len);
}

} // namespace beamsec
