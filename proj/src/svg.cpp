#include "pidfit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "pidfit/errors.hpp"

namespace pidfit {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 500;
constexpr int kMarginL = 70;
constexpr int kMarginR = 20;
constexpr int kMarginT = 20;
constexpr int kMarginB = 50;
constexpr int kTicks = 10;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<TimeSeries>& traces,
                       const std::vector<std::string>& labels) {
    if (traces.empty()) throw ConfigError("render_svg: no traces to plot");
    if (labels.size() != traces.size())
        throw ConfigError("render_svg: one label per trace required");

    double tmax = 0.0, ymin = 0.0, ymax = 1.0;
    for (const auto& tr : traces) {
        tmax = std::max(tmax, tr.grid.t_final);
        for (double v : tr.values) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double pw = kWidth - kMarginL - kMarginR;
    const double ph = kHeight - kMarginT - kMarginB;
    auto px = [&](double t) { return kMarginL + t / tmax * pw; };
    auto py = [&](double y) { return kMarginT + (ymax - y) / (ymax - ymin) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\">\n";
    s += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";

    // axes and ticks
    s += "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">\n";
    s += "<path d=\"M" + fmt(kMarginL) + " " + fmt(kMarginT) + " V" + fmt(kHeight - kMarginB) +
         " H" + fmt(kWidth - kMarginR) + "\"/>\n";
    s += "</g>\n";
    s += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int i = 0; i <= kTicks; ++i) {
        const double t = tmax * i / kTicks;
        const double x = px(t);
        s += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kHeight - kMarginB) + "\" x2=\"" + fmt(x) +
             "\" y2=\"" + fmt(kHeight - kMarginB + 5) + "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kHeight - kMarginB + 18) +
             "\" text-anchor=\"middle\">" + fmt(t) + "</text>\n";
        const double yv = ymin + (ymax - ymin) * i / kTicks;
        const double y = py(yv);
        s += "<line x1=\"" + fmt(kMarginL - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(kMarginL) +
             "\" y2=\"" + fmt(y) + "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + fmt(kMarginL - 8) + "\" y=\"" + fmt(y + 4) +
             "\" text-anchor=\"end\">" + fmt(yv) + "</text>\n";
    }
    s += "<text x=\"" + fmt(kMarginL + pw / 2) + "\" y=\"" + fmt(kHeight - 8) +
         "\" text-anchor=\"middle\">t (s)</text>\n";
    s += "<text x=\"14\" y=\"" + fmt(kMarginT + ph / 2) + "\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 14 " + fmt(kMarginT + ph / 2) + ")\">y</text>\n";
    s += "</g>\n";

    for (std::size_t k = 0; k < traces.size(); ++k) {
        const TimeSeries& tr = traces[k];
        const char* color = kColors[k % std::size(kColors)];
        s += "<polyline fill=\"none\" stroke=\"";
        s += color;
        s += "\" stroke-width=\"1.5\" points=\"";
        for (int i = 0; i < tr.grid.n_samples; ++i) {
            if (i) s += ' ';
            s += fmt(px(tr.grid.time(i))) + "," + fmt(py(tr.values[static_cast<std::size_t>(i)]));
        }
        s += "\"/>\n";
    }

    // legend
    s += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const double y = kMarginT + 16 + 18.0 * static_cast<double>(k);
        const char* color = kColors[k % std::size(kColors)];
        s += "<line x1=\"" + fmt(kWidth - kMarginR - 150) + "\" y1=\"" + fmt(y - 4) + "\" x2=\"" +
             fmt(kWidth - kMarginR - 120) + "\" y2=\"" + fmt(y - 4) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + fmt(kWidth - kMarginR - 114) + "\" y=\"" + fmt(y) + "\">" + labels[k] +
             "</text>\n";
    }
    s += "</g>\n";
    s += "</svg>\n";
    return s;
}

void emit_svg(const std::vector<TimeSeries>& traces, const std::vector<std::string>& labels,
              const std::string& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw NumericError("emit_svg: cannot write " + out_path);
    out << render_svg(traces, labels);
}

}  // namespace pidfit
