/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace risd2d {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 160, kTop = 30, kBottom = 55;

const char* color_of(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return "#1f77b4";
    case Scheme::Rps: return "#ff7f0e";
    case Scheme::Rpo: return "#2ca02c";
    case Scheme::Rrb: return "#d62728";
    case Scheme::NoRis: return "#9467bd";
  }
  return "#000000";
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string px(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Range {
  double lo, hi;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) return {lo - 1.0, hi + 1.0};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

// Tick positions at a 1/2/5 step covering the range.
std::vector<double> ticks(Range r) {
  const double raw = (r.hi - r.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step)
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

}  // namespace

std::string render_svg(const SweepResult& res) {
  std::vector<Scheme> order;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const PointStats& p : res.points) {
    if (std::find(order.begin(), order.end(), p.scheme) == order.end()) order.push_back(p.scheme);
    if (p.trials_ok == 0) continue;
    xlo = std::min(xlo, p.param_value);
    xhi = std::max(xhi, p.param_value);
    ylo = std::min(ylo, p.mean_rate);
    yhi = std::max(yhi, p.mean_rate);
  }
  if (!std::isfinite(xlo)) xlo = xhi = ylo = yhi = 0.0;
  const Range xr = padded(xlo, xhi), yr = padded(ylo, yhi);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto Y = [&](double v) { return kTop + (yr.hi - v) / (yr.hi - yr.lo) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" + px(kHeight) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(pw) + "\" height=\"" + px(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(xr)) {
    s += "<line class=\"xtick\" x1=\"" + px(X(t)) + "\" y1=\"" + px(kTop + ph) + "\" x2=\"" + px(X(t)) + "\" y2=\"" +
         px(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + px(X(t)) + "\" y=\"" + px(kTop + ph + 18) + "\" text-anchor=\"middle\">" + num(t) +
         "</text>\n";
  }
  for (double t : ticks(yr)) {
    s += "<line class=\"ytick\" x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(Y(t)) + "\" x2=\"" + px(kLeft) + "\" y2=\"" +
         px(Y(t)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(Y(t) + 4) + "\" text-anchor=\"end\">" + num(t) + "</text>\n";
  }
  s += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"" + px(kHeight - 12) + "\" text-anchor=\"middle\">" + res.param +
       "</text>\n";
  s += "<text transform=\"translate(18," + px(kTop + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">cellular sum-rate (bit/s/Hz)</text>\n";

  for (std::size_t i = 0; i < order.size(); ++i) {
    const Scheme sc = order[i];
    std::vector<const PointStats*> pts;
    for (const PointStats& p : res.points)
      if (p.scheme == sc && p.trials_ok > 0) pts.push_back(&p);
    std::sort(pts.begin(), pts.end(),
              [](const PointStats* a, const PointStats* b) { return a->param_value < b->param_value; });
    const std::string color = color_of(sc);
    if (pts.size() > 1) {
      s += "<polyline class=\"series\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"";
      for (std::size_t k = 0; k < pts.size(); ++k)
        s += (k ? " " : "") + px(X(pts[k]->param_value)) + "," + px(Y(pts[k]->mean_rate));
      s += "\"/>\n";
    }
    for (const PointStats* p : pts)
      s += "<circle class=\"marker\" cx=\"" + px(X(p->param_value)) + "\" cy=\"" + px(Y(p->mean_rate)) +
           "\" r=\"4\" fill=\"" + color + "\"/>\n";
    const double ly = kTop + 10 + 20 * static_cast<double>(i);
    const double lx = kLeft + pw + 15;
    s += "<g class=\"legend\"><line x1=\"" + px(lx) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(lx + 25) + "\" y2=\"" +
         px(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/><text x=\"" + px(lx + 32) + "\" y=\"" +
         px(ly + 4) + "\">" + to_string(sc) + "</text></g>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace risd2d
