#include "wentropy/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace wentropy {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

namespace {

// Commas and quotes never occur in validated names; quote defensively.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (log10 t, y)
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 220.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 200.0;
constexpr double kTop = 30.0;
constexpr double kGap = 50.0;

void panel(std::ostream& out, double top, const std::string& title, const std::vector<Curve>& curves) {
  const double w = kWidth - kLeft - kRight;
  const double h = kPanelHeight;
  out << "<text x=\"" << fixed(kLeft) << "\" y=\"" << fixed(top - 8)
      << "\" font-size=\"13\">" << xml_escape(title) << "</text>\n";
  out << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(w)
      << "\" height=\"" << fixed(h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& c : curves) {
    for (const auto& [x, y] : c.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (!(xhi >= xlo)) {
    out << "<text x=\"" << fixed(kLeft + 10) << "\" y=\"" << fixed(top + h / 2)
        << "\" font-size=\"12\">no time series</text>\n";
    return;
  }
  if (xhi - xlo < 1e-12) {
    xlo -= 0.5;
    xhi += 0.5;
  }
  const double span = yhi - ylo;
  const double pad = span > 1e-300 ? 0.05 * span : std::max(1e-12, 0.05 * std::abs(yhi) + 1e-12);
  ylo -= pad;
  yhi += pad;
  const auto X = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * w; };
  const auto Y = [&](double y) { return top + h - (y - ylo) / (yhi - ylo) * h; };
  for (int k = 0; k <= 4; ++k) {
    const double yv = ylo + (yhi - ylo) * k / 4.0;
    out << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(Y(yv) + 4)
        << "\" font-size=\"10\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
    const double xv = xlo + (xhi - xlo) * k / 4.0;
    out << "<text x=\"" << fixed(X(xv)) << "\" y=\"" << fixed(top + h + 14)
        << "\" font-size=\"10\" text-anchor=\"middle\">" << tick(std::pow(10.0, xv)) << "</text>\n";
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::string path;
    for (const auto& [x, y] : curves[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      path += (path.empty() ? "M" : " L") + fixed(X(x)) + " " + fixed(Y(y));
    }
    if (!path.empty()) {
      out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = top + 12 + 16.0 * static_cast<double>(i);
    out << "<line x1=\"" << fixed(kLeft + w + 10) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\""
        << fixed(kLeft + w + 30) << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fixed(kLeft + w + 35) << "\" y=\"" << fixed(ly)
        << "\" font-size=\"11\">" << xml_escape(curves[i].label) << "</text>\n";
  }
}

}  // namespace

void write_csv(std::ostream& out, const ScenarioResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& o : result.outcomes) {
    const auto& r = o.report;
    for (const auto& p : r.series) {
      out << csv_field(result.name) << ',' << csv_field(r.name) << ',' << format_number(p.t) << ','
          << format_number(p.entropy) << ',' << format_number(p.fisher) << ','
          << format_number(p.w_entropy) << ',' << format_number(p.margin) << ','
          << (p.pass ? "true" : "false") << '\n';
    }
  }
}

void write_svg(std::ostream& out, const ScenarioResult& result, double N) {
  const double height = kTop + 3 * (kPanelHeight + kGap) + 10;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth) << "\" height=\""
      << fixed(height) << "\" viewBox=\"0 0 " << fixed(kWidth) << ' ' << fixed(height)
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << fixed(kLeft) << "\" y=\"18\" font-size=\"15\">" << xml_escape(result.name)
      << "</text>\n";

  Curve w{"W(t)", {}};
  Curve rate{"2t I(t) / N", {}};
  if (result.flow) {
    for (const auto& s : result.flow->samples) {
      w.points.emplace_back(std::log10(s.t), s.w_entropy);
      rate.points.emplace_back(std::log10(s.t), 2.0 * s.t * s.fisher / N);
    }
  }
  std::vector<Curve> margins;
  for (const auto& o : result.outcomes) {
    Curve c{o.report.name, {}};
    for (const auto& p : o.report.series) {
      if (std::isfinite(p.t) && p.t > 0.0) c.points.emplace_back(std::log10(p.t), p.margin);
    }
    if (!c.points.empty()) margins.push_back(std::move(c));
  }
  double top = kTop + 20;
  panel(out, top, "W-entropy against t", {w});
  top += kPanelHeight + kGap;
  panel(out, top, "normalised Fisher information 2t I / N", {rate});
  top += kPanelHeight + kGap;
  panel(out, top, "check margins", margins);
  out << "</svg>\n";
}

}  // namespace wentropy
