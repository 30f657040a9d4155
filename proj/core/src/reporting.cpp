// Copyright 2026 The qutomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qutomo/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qutomo/errors.hpp"

namespace qutomo {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct Series {
    const char* name;
    const char* color;
    std::vector<double> mean;
    std::vector<double> std;
};

}  // namespace

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw IoError("emit_csv: cannot open " + path);
    }
    f << kResultCsvHeader << "\n";
    for (const ResultRow& r : rows) {
        f << fmt("%.10g", r.swept) << ',' << fmt("%.10g", r.cnn_mean) << ','
          << fmt("%.10g", r.cnn_std) << ',' << fmt("%.10g", r.stokes_mean)
          << ',' << fmt("%.10g", r.stokes_std) << ','
          << fmt("%.3f", r.seconds) << "\n";
    }
    if (!f) {
        throw IoError("emit_csv: short write to " + path);
    }
}

void emit_plot(const std::vector<ResultRow>& rows, const std::string& stem) {
    if (rows.empty()) {
        throw InvalidArgument("emit_plot: no rows");
    }
    emit_csv(rows, stem + ".csv");

    const double width = 640.0, height = 480.0;
    const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    double x_min = rows.front().swept, x_max = rows.front().swept;
    double y_min = 1.0, y_max = 0.0;
    for (const ResultRow& r : rows) {
        x_min = std::min(x_min, r.swept);
        x_max = std::max(x_max, r.swept);
        y_min = std::min({y_min, r.cnn_mean - r.cnn_std, r.stokes_mean - r.stokes_std});
        y_max = std::max({y_max, r.cnn_mean + r.cnn_std, r.stokes_mean + r.stokes_std});
    }
    if (x_max == x_min) {
        x_max = x_min + 1.0;
    }
    y_min = std::max(0.0, y_min - 0.05);
    y_max = std::min(1.05, y_max + 0.05);
    if (y_max <= y_min) {
        y_max = y_min + 0.1;
    }

    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

    Series series[2] = {{"cnn", "#c0392b", {}, {}}, {"stokes", "#27ae60", {}, {}}};
    for (const ResultRow& r : rows) {
        series[0].mean.push_back(r.cnn_mean);
        series[0].std.push_back(r.cnn_std);
        series[1].mean.push_back(r.stokes_mean);
        series[1].std.push_back(r.stokes_std);
    }

    std::ofstream f(stem + ".svg", std::ios::trunc);
    if (!f) {
        throw IoError("emit_plot: cannot open " + stem + ".svg");
    }
    f << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
    f << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

    // Axes.
    f << "  <line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    f << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double yv = y_min + (y_max - y_min) * i / 5.0;
        const double yy = py(yv);
        f << "  <line x1=\"" << ml - 4 << "\" y1=\"" << yy << "\" x2=\"" << ml
          << "\" y2=\"" << yy << "\" stroke=\"black\"/>\n";
        f << "  <text x=\"" << ml - 8 << "\" y=\"" << yy + 4
          << "\" font-size=\"12\" text-anchor=\"end\">" << fmt("%.3g", yv)
          << "</text>\n";
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double xx = px(rows[i].swept);
        f << "  <line x1=\"" << xx << "\" y1=\"" << mt + ph << "\" x2=\"" << xx
          << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        f << "  <text x=\"" << xx << "\" y=\"" << mt + ph + 18
          << "\" font-size=\"12\" text-anchor=\"middle\">"
          << fmt("%.4g", rows[i].swept) << "</text>\n";
    }
    f << "  <text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
      << "\" font-size=\"13\" text-anchor=\"middle\">swept value</text>\n";
    f << "  <text x=\"16\" y=\"" << mt + ph / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << mt + ph / 2 << ")\">average fidelity</text>\n";

    for (const Series& s : series) {
        f << "  <polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            f << px(rows[i].swept) << ',' << py(s.mean[i]) << ' ';
        }
        f << "\"/>\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double xx = px(rows[i].swept);
            const double ylo = py(std::max(y_min, s.mean[i] - s.std[i]));
            const double yhi = py(std::min(y_max, s.mean[i] + s.std[i]));
            f << "  <line x1=\"" << xx << "\" y1=\"" << ylo << "\" x2=\"" << xx
              << "\" y2=\"" << yhi << "\" stroke=\"" << s.color << "\"/>\n";
            f << "  <line x1=\"" << xx - 3 << "\" y1=\"" << ylo << "\" x2=\""
              << xx + 3 << "\" y2=\"" << ylo << "\" stroke=\"" << s.color
              << "\"/>\n";
            f << "  <line x1=\"" << xx - 3 << "\" y1=\"" << yhi << "\" x2=\""
              << xx + 3 << "\" y2=\"" << yhi << "\" stroke=\"" << s.color
              << "\"/>\n";
            f << "  <circle cx=\"" << xx << "\" cy=\"" << py(s.mean[i])
              << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
        }
    }

    // Legend.
    const double lx = ml + pw - 110, ly = mt + 14;
    for (int i = 0; i < 2; ++i) {
        f << "  <line x1=\"" << lx << "\" y1=\"" << ly + 18 * i << "\" x2=\""
          << lx + 24 << "\" y2=\"" << ly + 18 * i << "\" stroke=\""
          << series[i].color << "\" stroke-width=\"1.5\"/>\n";
        f << "  <text x=\"" << lx + 30 << "\" y=\"" << ly + 18 * i + 4
          << "\" font-size=\"12\">" << series[i].name << "</text>\n";
    }
    f << "</svg>\n";
    if (!f) {
        throw IoError("emit_plot: short write to " + stem + ".svg");
    }
}

}  // namespace qutomo
