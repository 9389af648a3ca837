#include "batchsim/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "batchsim/harness.hpp"

namespace batchsim {

namespace {

constexpr double kLeft = 80, kRight = 780, kTop = 40, kBottom = 400;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string boxplot_svg(std::string_view title, std::span<const BoxGlyph> glyphs) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const BoxGlyph& g : glyphs) {
    lo = std::min(lo, g.stats.lower_whisker);
    hi = std::max(hi, g.stats.upper_whisker);
    for (double o : g.stats.outliers) {
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
  }
  if (glyphs.empty()) lo = 0, hi = 1;
  if (hi - lo <= 0) lo -= 1, hi += 1;
  const double pad = (hi - lo) * 0.05;
  lo -= pad;
  hi += pad;
  auto y = [&](double v) { return kBottom - (v - lo) / (hi - lo) * (kBottom - kTop); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 480\" width=\"800\" height=\"480\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"480\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << escape(title) << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
     << kBottom << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(y(v)) << "\" x2=\"" << kLeft << "\" y2=\""
       << num(y(v)) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y(v) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
       << "</text>\n";
  }

  const double slot = glyphs.empty() ? 0 : (kRight - kLeft) / static_cast<double>(glyphs.size());
  for (std::size_t i = 0; i < glyphs.size(); ++i) {
    const BoxGlyph& g = glyphs[i];
    const double cx = kLeft + (static_cast<double>(i) + 0.5) * slot;
    const double half = slot * 0.2;
    os << "<g class=\"glyph\" data-scheduler=\"" << escape(g.scheduler) << "\">\n";
    // whiskers
    os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y(g.stats.upper_whisker)) << "\" x2=\""
       << num(cx) << "\" y2=\"" << num(y(g.stats.q3)) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y(g.stats.q1)) << "\" x2=\"" << num(cx)
       << "\" y2=\"" << num(y(g.stats.lower_whisker)) << "\" stroke=\"black\"/>\n";
    for (double w : {g.stats.lower_whisker, g.stats.upper_whisker}) {
      os << "<line x1=\"" << num(cx - half / 2) << "\" y1=\"" << num(y(w)) << "\" x2=\""
         << num(cx + half / 2) << "\" y2=\"" << num(y(w)) << "\" stroke=\"black\"/>\n";
    }
    // box and median
    os << "<rect class=\"box\" x=\"" << num(cx - half) << "\" y=\"" << num(y(g.stats.q3))
       << "\" width=\"" << num(2 * half) << "\" height=\"" << num(y(g.stats.q1) - y(g.stats.q3))
       << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    os << "<line class=\"median\" x1=\"" << num(cx - half) << "\" y1=\"" << num(y(g.stats.q2))
       << "\" x2=\"" << num(cx + half) << "\" y2=\"" << num(y(g.stats.q2))
       << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (double o : g.stats.outliers) {
      os << "<circle class=\"outlier\" cx=\"" << num(cx) << "\" cy=\"" << num(y(o))
         << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
    }
    os << "<text x=\"" << num(cx) << "\" y=\"420\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"13\">"
       << legend_number(g.scheduler) << "</text>\n";
    os << "<text x=\"" << num(cx) << "\" y=\"438\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"10\">"
       << escape(g.scheduler) << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace batchsim
