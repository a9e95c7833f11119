#include "halfdisk/trajectory_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace halfdisk {

namespace {

constexpr const char* kCsvHeader = "t,x,y,theta,u1,u2,h1,h2,h3";

std::array<double, 9> row_of(const TrajectorySample& s) {
  return {s.t,          s.pose.x,      s.pose.y,
          s.pose.theta, s.control.u1,  s.control.u2,
          s.covector.h1, s.covector.h2, s.covector.h3};
}

TrajectorySample sample_of(const std::array<double, 9>& row) {
  TrajectorySample s;
  s.t = row[0];
  s.pose.x = row[1];
  s.pose.y = row[2];
  s.pose.theta = row[3];
  s.control.u1 = row[4];
  s.control.u2 = row[5];
  s.covector.h1 = row[6];
  s.covector.h2 = row[7];
  s.covector.h3 = row[8];
  return s;
}

/// Fixed float form for SVG coordinates.
std::string svg_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.8g", v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const std::vector<TrajectorySample>& samples) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const TrajectorySample& s : samples) {
    const auto row = row_of(s);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<TrajectorySample> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("parse_csv: missing or unexpected header");
  }
  std::vector<TrajectorySample> samples;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::array<double, 9> row;
    const char* p = line.c_str();
    for (std::size_t i = 0; i < row.size(); ++i) {
      char* end = nullptr;
      row[i] = std::strtod(p, &end);
      if (end == p) {
        throw std::invalid_argument("parse_csv: malformed number");
      }
      p = end;
      if (i + 1 < row.size()) {
        if (*p != ',') {
          throw std::invalid_argument("parse_csv: expected 9 columns");
        }
        ++p;
      }
    }
    if (*p != '\0') {
      throw std::invalid_argument("parse_csv: trailing characters");
    }
    samples.push_back(sample_of(row));
  }
  return samples;
}

std::string to_json(const std::vector<TrajectorySample>& samples) {
  nlohmann::json j;
  j["total_time"] = samples.empty() ? 0.0 : samples.back().t;
  nlohmann::json rows = nlohmann::json::array();
  for (const TrajectorySample& s : samples) {
    rows.push_back({{"t", s.t},
                    {"x", s.pose.x},
                    {"y", s.pose.y},
                    {"theta", s.pose.theta},
                    {"u1", s.control.u1},
                    {"u2", s.control.u2},
                    {"h1", s.covector.h1},
                    {"h2", s.covector.h2},
                    {"h3", s.covector.h3}});
  }
  j["samples"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string to_svg(const std::vector<TrajectorySample>& samples,
                   double tick_spacing) {
  if (samples.size() < 2) {
    throw std::invalid_argument("to_svg: need at least 2 samples");
  }
  if (!(tick_spacing > 0.0)) {
    throw std::invalid_argument("to_svg: tick spacing must be positive");
  }

  // SVG y grows downward; emit with y negated so the plot reads as usual.
  double xmin = samples[0].pose.x, xmax = xmin;
  double ymin = -samples[0].pose.y, ymax = ymin;
  for (const TrajectorySample& s : samples) {
    xmin = std::min(xmin, s.pose.x);
    xmax = std::max(xmax, s.pose.x);
    ymin = std::min(ymin, -s.pose.y);
    ymax = std::max(ymax, -s.pose.y);
  }
  double w = xmax - xmin;
  double h = ymax - ymin;
  const double pad = 0.05 * std::max({w, h, 1e-6});
  xmin -= pad;
  ymin -= pad;
  w += 2.0 * pad;
  h += 2.0 * pad;
  const double diag = std::hypot(w, h);
  const double tick_len = 0.04 * diag;
  const double stroke = 0.004 * diag;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ";
  out += "width=\"640\" height=\"640\" viewBox=\"";
  out += svg_num(xmin) + " " + svg_num(ymin) + " " + svg_num(w) + " " +
         svg_num(h) + "\">\n";

  // Heading ticks first so the path draws on top of them.
  const double total = samples.back().t;
  out += "  <g stroke=\"#999999\" stroke-width=\"" + svg_num(stroke) +
         "\" stroke-linecap=\"round\">\n";
  std::size_t cursor = 1;
  for (double tick = 0.0; tick <= total + 1e-12; tick += tick_spacing) {
    const double t = std::min(tick, total);
    while (cursor + 1 < samples.size() && samples[cursor].t < t) {
      ++cursor;
    }
    const TrajectorySample& a = samples[cursor - 1];
    const TrajectorySample& b = samples[cursor];
    const double span = b.t - a.t;
    const double f = span > 0.0 ? std::clamp((t - a.t) / span, 0.0, 1.0) : 0.0;
    const double x = a.pose.x + f * (b.pose.x - a.pose.x);
    const double y = a.pose.y + f * (b.pose.y - a.pose.y);
    const double th =
        a.pose.theta + f * normalize_angle(b.pose.theta - a.pose.theta);
    const double tx = x + tick_len * std::cos(th);
    const double ty = y + tick_len * std::sin(th);
    out += "    <line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(-y) +
           "\" x2=\"" + svg_num(tx) + "\" y2=\"" + svg_num(-ty) + "\"/>\n";
  }
  out += "  </g>\n";

  out += "  <polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"" +
         svg_num(stroke) + "\" points=\"";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += svg_num(samples[i].pose.x) + "," + svg_num(-samples[i].pose.y);
  }
  out += "\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace halfdisk
