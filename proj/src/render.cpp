/*
 * Copyright (C) 2026 The fdf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "render.hpp"

#include "csv.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace fdf
{

namespace
{

std::string fixed2(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Score of `model` at horizon index `h` and partition; NaN when absent.
double cell(const ScoreReport& r, std::size_t h, const std::string& model, bool test)
{
    const auto& hs = r.horizons[h];
    for (std::size_t i = 0; i < hs.models.size(); ++i) {
        if (hs.models[i] == model) {
            return test ? hs.test[i].value : hs.train[i].value;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string pad(const std::string& s, std::size_t width, bool left)
{
    std::string fill(width > s.size() ? width - s.size() : 0, ' ');
    return left ? s + fill : fill + s;
}

std::string esc(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string num(double v)
{
    return format_sig(v, 6);
}

std::string safe_name(const std::string& s)
{
    std::string out;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
        out += ok ? c : '_';
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string line_chart(const ScoreReport& r, std::size_t region)
{
    const auto& hs       = r.horizons.front();
    const std::size_t T  = r.periods.size();
    const double width   = 800, plot_h = 300, left = 70, top = 40, right = 20;
    const double plot_w  = width - left - right;
    const std::size_t nseries = 1 + hs.models.size();
    const double legend_top   = top + plot_h + 50;
    const double height       = legend_top + 18.0 * static_cast<double>((nseries + 2) / 3) + 10;

    auto series = [&](std::size_t s) {
        const auto& src = s == 0 ? hs.actual : hs.predictions[s - 1];
        return std::vector<double>(src.begin() + static_cast<long>(region * T),
                                   src.begin() + static_cast<long>((region + 1) * T));
    };
    double ymax = 0.0;
    for (std::size_t s = 0; s < nseries; ++s) {
        for (double v : series(s)) {
            if (!std::isnan(v)) {
                ymax = std::max(ymax, v);
            }
        }
    }
    ymax = ymax > 0.0 ? ymax * 1.05 : 1.0;
    auto x = [&](std::size_t k) {
        return left + (T > 1 ? plot_w * static_cast<double>(k) / static_cast<double>(T - 1) : plot_w / 2);
    };
    auto y = [&](double v) { return top + plot_h * (1.0 - std::max(0.0, v) / ymax); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
                      num(height) + "\" viewBox=\"0 0 " + num(width) + ' ' + num(height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
    out += "<text x=\"" + num(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" +
           esc(r.regions[region]) + " (h=" + std::to_string(hs.horizon) + ")</text>\n";

    long test_start = r.periods.offset(r.test.first);
    if (test_start >= 0 && static_cast<std::size_t>(test_start) < T) {
        double x0 = x(static_cast<std::size_t>(test_start));
        out += "<rect x=\"" + num(x0) + "\" y=\"" + num(top) + "\" width=\"" + num(left + plot_w - x0) +
               "\" height=\"" + num(plot_h) + "\" fill=\"#eeeeee\"/>\n";
    }
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(left + plot_w) + "\" y2=\"" +
           num(top + plot_h) + "\" stroke=\"#000000\"/>\n";
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(top + plot_h) + "\" stroke=\"#000000\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        double v = ymax * t / 4.0;
        out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(y(v) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" + num(v) + "</text>\n";
    }
    for (std::size_t k = 0; k < T; k += 12) {
        out += "<text x=\"" + num(x(k)) + "\" y=\"" + num(top + plot_h + 16) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" + r.periods.at(k).to_string() +
               "</text>\n";
    }
    for (std::size_t s = 0; s < nseries; ++s) {
        auto values       = series(s);
        std::string color = s == 0 ? "#000000" : kPalette[(s - 1) % std::size(kPalette)];
        std::string d;
        bool pen = false;
        for (std::size_t k = 0; k < T; ++k) {
            if (std::isnan(values[k])) {
                pen = false;
                continue;
            }
            d += (pen ? " L" : (d.empty() ? "M" : " M")) + num(x(k)) + ' ' + num(y(values[k]));
            pen = true;
        }
        if (!d.empty()) {
            out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                   (s == 0 ? "2" : "1") + "\"/>\n";
        }
        const ReportModel* m = s == 0 ? nullptr : r.find_model(hs.models[s - 1]);
        std::string label    = s == 0 ? "Actual" : (m ? m->label : hs.models[s - 1]);
        double lx            = left + 240.0 * static_cast<double>(s % 3);
        double ly            = legend_top + 18.0 * static_cast<double>(s / 3);
        out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 20) + "\" y2=\"" +
               num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
               esc(label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string rank_color(double rank, std::size_t m)
{
    double t = m > 1 ? (rank - 1.0) / static_cast<double>(m - 1) : 0.0;
    t        = std::clamp(t, 0.0, 1.0);
    int red   = static_cast<int>(std::lround(40 + t * (215 - 40)));
    int green = static_cast<int>(std::lround(160 - t * (160 - 48)));
    int blue  = static_cast<int>(std::lround(80 - t * (80 - 39)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", red, green, blue);
    return buf;
}

std::string heatmap(const ScoreReport& r)
{
    const double cell_w = 70, cell_h = 22, left = 80, label_h = 110;
    std::size_t max_models = 0;
    for (const auto& hs : r.horizons) {
        max_models = std::max(max_models, hs.models.size());
    }
    double width  = left + cell_w * static_cast<double>(max_models) + 20;
    double height = 20;
    for (const auto& hs : r.horizons) {
        height += 30 + label_h + cell_h * static_cast<double>(hs.regions.size()) + 20;
    }
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
                      num(height) + "\" viewBox=\"0 0 " + num(width) + ' ' + num(height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
    double y0 = 20;
    for (const auto& hs : r.horizons) {
        out += "<text x=\"10\" y=\"" + num(y0 + 16) + "\" font-family=\"sans-serif\" font-size=\"14\">Rank by region (" +
               esc(r.metric.name()) + ", h=" + std::to_string(hs.horizon) + ")</text>\n";
        double grid_top = y0 + 30 + label_h;
        for (std::size_t m = 0; m < hs.models.size(); ++m) {
            const ReportModel* rm = r.find_model(hs.models[m]);
            double cx             = left + cell_w * (static_cast<double>(m) + 0.5);
            out += "<text x=\"" + num(cx) + "\" y=\"" + num(grid_top - 6) +
                   "\" font-family=\"sans-serif\" font-size=\"10\" transform=\"rotate(-60 " + num(cx) + ' ' +
                   num(grid_top - 6) + ")\">" + esc(rm ? rm->label : hs.models[m]) + "</text>\n";
        }
        for (std::size_t g = 0; g < hs.regions.size(); ++g) {
            double cy = grid_top + cell_h * static_cast<double>(g);
            out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(cy + 15) +
                   "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" + esc(hs.regions[g]) +
                   "</text>\n";
            for (std::size_t m = 0; m < hs.models.size(); ++m) {
                double rank = hs.ranks[g][m];
                double cx   = left + cell_w * static_cast<double>(m);
                out += "<rect x=\"" + num(cx) + "\" y=\"" + num(cy) + "\" width=\"" + num(cell_w) + "\" height=\"" +
                       num(cell_h) + "\" fill=\"" + rank_color(rank, hs.models.size()) + "\" stroke=\"#ffffff\"/>\n";
                out += "<text x=\"" + num(cx + cell_w / 2) + "\" y=\"" + num(cy + 15) +
                       "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\" fill=\"#ffffff\">" +
                       num(rank) + "</text>\n";
            }
        }
        y0 = grid_top + cell_h * static_cast<double>(hs.regions.size()) + 20;
    }
    out += "</svg>\n";
    return out;
}

} // namespace

std::string render_table(const ScoreReport& report)
{
    if (report.horizons.empty()) {
        fail(ErrorCode::MalformedReport, "report has no horizons");
    }
    std::vector<std::string> header{"Model"};
    for (const auto& hs : report.horizons) {
        header.push_back("h=" + std::to_string(hs.horizon) + " train");
        header.push_back("h=" + std::to_string(hs.horizon) + " test");
    }
    std::vector<std::size_t> order(report.models.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double sa = cell(report, 0, report.models[a].id, true);
        double sb = cell(report, 0, report.models[b].id, true);
        if (std::isnan(sa) != std::isnan(sb)) {
            return std::isnan(sb);
        }
        return !std::isnan(sa) && sa < sb;
    });
    std::vector<std::vector<std::string>> rows{header};
    for (std::size_t i : order) {
        std::vector<std::string> row{report.models[i].label};
        for (std::size_t h = 0; h < report.horizons.size(); ++h) {
            for (bool test : {false, true}) {
                double v = cell(report, h, report.models[i].id, test);
                row.push_back(std::isnan(v) ? "-" : fixed2(v));
            }
        }
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    std::string out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            if (c > 0) {
                line += "  ";
            }
            line += pad(rows[r][c], width[c], c == 0);
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + '\n';
        if (r == 0) {
            std::size_t total = std::accumulate(width.begin(), width.end(), std::size_t{0}) + 2 * (width.size() - 1);
            out += std::string(total, '-') + '\n';
        }
    }
    out += "Scores: " + report.metric.name() + "; train " + report.train.first.to_string() + ".." +
           report.train.last.to_string() + ", test " + report.test.first.to_string() + ".." +
           report.test.last.to_string() + "\n";
    return out;
}

std::vector<std::pair<std::string, std::string>> render_svgs(const ScoreReport& report)
{
    if (report.horizons.empty()) {
        fail(ErrorCode::MalformedReport, "report has no horizons");
    }
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t r = 0; r < report.regions.size(); ++r) {
        out.emplace_back("forecast_" + safe_name(report.regions[r]) + ".svg", line_chart(report, r));
    }
    out.emplace_back("rank_heatmap.svg", heatmap(report));
    return out;
}

} // namespace fdf
