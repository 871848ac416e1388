#include "newsflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace newsflow::report {

namespace {

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s)
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v)
  {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void finish()
  {
    if (!std::isfinite(lo)) {
      lo = 0;
      hi = 1;
    }
    if (hi <= lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

} // namespace

CurveLayer curve_from_fit(const simulate::SmootherFit& fit, std::string label, std::string color)
{
  CurveLayer c;
  c.label = std::move(label);
  c.color = std::move(color);
  for (std::size_t g = 0; g < fit.grid.size(); ++g) {
    if (std::isnan(fit.curve[g]))
      continue;
    c.x.push_back(fit.grid[g]);
    c.y.push_back(fit.curve[g]);
    if (!fit.lower.empty()) {
      c.lower.push_back(fit.lower[g]);
      c.upper.push_back(fit.upper[g]);
    }
  }
  return c;
}

std::string render_svg(const Figure& f)
{
  Range xr, yr;
  if (f.x_range) {
    xr.lo = f.x_range->first;
    xr.hi = f.x_range->second;
  } else {
    for (const auto& s : f.scatter)
      for (double v : s.x)
        xr.add(v);
    for (const auto& c : f.curves)
      for (double v : c.x)
        xr.add(v);
  }
  if (f.y_range) {
    yr.lo = f.y_range->first;
    yr.hi = f.y_range->second;
  } else {
    for (const auto& s : f.scatter)
      for (double v : s.y)
        yr.add(v);
    for (const auto& c : f.curves) {
      for (double v : c.y)
        yr.add(v);
      for (double v : c.lower)
        yr.add(v);
      for (double v : c.upper)
        yr.add(v);
    }
  }
  xr.finish();
  yr.finish();

  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = f.width - left - right, ph = f.height - top - bottom;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };
  auto inside = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && x >= xr.lo && x <= xr.hi && y >= yr.lo && y <= yr.hi;
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(f.width) + "\" height=\"" +
       std::to_string(f.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(f.title) +
       "</text>\n";
  for (const auto& [lo, hi] : f.highlights) {
    double a = px(std::max(lo, xr.lo)), b = px(std::min(hi, xr.hi));
    s += "<rect x=\"" + num(a) + "\" y=\"" + num(top) + "\" width=\"" + num(std::max(b - a, 1.0)) + "\" height=\"" +
         num(ph) + "\" fill=\"#f3e6b3\"/>\n";
  }
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = xr.lo + (xr.hi - xr.lo) * k / 4.0, yv = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    s += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" +
         tick_label(xv) + "</text>\n";
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + tick_label(yv) +
         "</text>\n";
  }
  s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(f.height - 10.0) + "\" text-anchor=\"middle\">" +
       escape(f.x_label) + "</text>\n";
  s += "<text transform=\"translate(16," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(f.y_label) + "</text>\n";

  for (const auto& layer : f.scatter) {
    s += "<g fill=\"" + layer.color + "\" fill-opacity=\"0.35\">\n";
    for (std::size_t i = 0; i < layer.x.size() && i < layer.y.size(); ++i)
      if (inside(layer.x[i], layer.y[i]))
        s += "<circle cx=\"" + num(px(layer.x[i])) + "\" cy=\"" + num(py(layer.y[i])) + "\" r=\"1.5\"/>\n";
    s += "</g>\n";
  }
  auto polyline = [&](const std::vector<double>& x, const std::vector<double>& y, const std::string& color,
                      const char* extra) {
    std::string pts;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      if (!std::isfinite(y[i]))
        continue;
      if (!pts.empty())
        pts += ' ';
      pts += num(px(x[i])) + "," + num(py(std::clamp(y[i], yr.lo, yr.hi)));
    }
    return "<polyline fill=\"none\" stroke=\"" + color + "\" " + extra + " points=\"" + pts + "\"/>\n";
  };
  for (const auto& c : f.curves) {
    if (!c.lower.empty()) {
      s += polyline(c.x, c.lower, c.color, "stroke-dasharray=\"5,3\"");
      s += polyline(c.x, c.upper, c.color, "stroke-dasharray=\"5,3\"");
    }
    s += polyline(c.x, c.y, c.color, "stroke-width=\"2\"");
  }
  double ly = top + 14;
  for (const auto& c : f.curves) {
    s += "<line x1=\"" + num(left + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(left + 30) + "\" y2=\"" +
         num(ly - 4) + "\" stroke=\"" + c.color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(left + 36) + "\" y=\"" + num(ly) + "\">" + escape(c.label) + "</text>\n";
    ly += 16;
  }
  s += "</svg>\n";
  return s;
}

} // namespace newsflow::report
