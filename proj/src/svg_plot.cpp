#include "dio/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace dio {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 130.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 52.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

/// Round tick spacing giving roughly `target` intervals over [lo, hi].
double nice_step(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string trajectory_svg(const Trajectory& trajectory, const std::string& title,
                           std::optional<double> reference) {
  const auto& samples = trajectory.samples;
  double t0 = 0.0, t1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!samples.empty()) {
    t0 = samples.front().t;
    t1 = std::max(samples.back().t, t0 + 1e-9);
    y0 = y1 = samples.front().x.size() ? samples.front().x(0) : 0.0;
    for (const auto& s : samples) {
      if (s.x.size() == 0) continue;
      y0 = std::min(y0, s.x.minCoeff());
      y1 = std::max(y1, s.x.maxCoeff());
    }
  }
  if (reference) {
    y0 = std::min(y0, *reference);
    y1 = std::max(y1, *reference);
  }
  const double pad = std::max(0.05 * (y1 - y0), 1e-6);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * pw; };
  const auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << escape(title) << "</text>\n";

  // Grid and ticks.
  const double ty = nice_step(y0, y1, 6);
  for (double y = std::ceil(y0 / ty) * ty; y <= y1 + 1e-12; y += ty) {
    svg << "<line x1=\"" << fmt(kLeft) << "\" x2=\"" << fmt(kLeft + pw)
        << "\" y1=\"" << fmt(py(y)) << "\" y2=\"" << fmt(py(y))
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(y) + 4)
        << "\" text-anchor=\"end\">" << fmt(std::abs(y) < ty * 1e-9 ? 0.0 : y, "%g")
        << "</text>\n";
  }
  const double tt = nice_step(t0, t1, 6);
  for (double t = std::ceil(t0 / tt) * tt; t <= t1 + 1e-12; t += tt) {
    svg << "<line x1=\"" << fmt(px(t)) << "\" x2=\"" << fmt(px(t)) << "\" y1=\""
        << fmt(kTop) << "\" y2=\"" << fmt(kTop + ph) << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(kTop + ph + 18)
        << "\" text-anchor=\"middle\">" << fmt(t, "%g") << "</text>\n";
  }
  svg << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">t</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << kTop + ph / 2 << ")\">x_i(t)</text>\n";

  if (reference) {
    svg << "<line x1=\"" << fmt(kLeft) << "\" x2=\"" << fmt(kLeft + pw)
        << "\" y1=\"" << fmt(py(*reference)) << "\" y2=\"" << fmt(py(*reference))
        << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
  }

  // At most ~2000 vertices per line keeps the file small.
  const std::size_t stride = std::max<std::size_t>(1, samples.size() / 2000);
  for (int i = 0; i < trajectory.agents; ++i) {
    const char* colour = kPalette[i % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < samples.size(); k += stride) {
      svg << fmt(px(samples[k].t)) << ',' << fmt(py(samples[k].x(i))) << ' ';
    }
    if (!samples.empty() && (samples.size() - 1) % stride != 0) {
      svg << fmt(px(samples.back().t)) << ',' << fmt(py(samples.back().x(i)));
    }
    svg << "\"/>\n";
    const double ly = kTop + 16 + 18 * i;
    svg << "<line x1=\"" << fmt(kLeft + pw + 14) << "\" x2=\"" << fmt(kLeft + pw + 38)
        << "\" y1=\"" << fmt(ly) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt(kLeft + pw + 44) << "\" y=\"" << fmt(ly + 4)
        << "\">agent " << i << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace dio
