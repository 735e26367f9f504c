#include "wscan/svg.hpp"

#include "wscan/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace wscan::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

std::string attrs(const Style& s) {
  std::string out = " fill=\"" + s.fill + "\" stroke=\"" + s.stroke + "\" stroke-width=\"" +
                    num(s.stroke_width) + "\"";
  if (!s.dash.empty()) out += " stroke-dasharray=\"" + s.dash + "\"";
  if (s.opacity < 1.0) out += " opacity=\"" + num(s.opacity) + "\"";
  return out;
}

std::string tick_label(double v, double step) {
  char buf[32];
  if (step >= 1.0) std::snprintf(buf, sizeof buf, "%.0f", v);
  else if (step >= 0.1) std::snprintf(buf, sizeof buf, "%.1f", v);
  else if (step >= 0.01) std::snprintf(buf, sizeof buf, "%.2f", v);
  else std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h, const Style& style) {
  body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\"" << attrs(style) << "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const Style& style) {
  body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
        << "\" y2=\"" << num(y2) << "\"" << attrs(style) << "/>\n";
}

void Document::polyline(std::span<const std::pair<double, double>> points, const Style& style) {
  body_ << "<polyline points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ << ' ';
    body_ << num(points[i].first) << ',' << num(points[i].second);
  }
  body_ << "\"" << attrs(style) << "/>\n";
}

void Document::circle(double cx, double cy, double r, const Style& style) {
  body_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\""
        << attrs(style) << "/>\n";
}

void Document::text(double x, double y, const std::string& content, double size,
                    const std::string& anchor, const std::string& color, double rotate) {
  body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(size)
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\" fill=\"" << color
        << "\"";
  if (rotate != 0.0) {
    body_ << " transform=\"rotate(" << num(rotate) << ' ' << num(x) << ' ' << num(y) << ")\"";
  }
  body_ << '>' << escape(content) << "</text>\n";
}

void Document::begin_group(double dx, double dy) {
  body_ << "<g transform=\"translate(" << num(dx) << ',' << num(dy) << ")\">\n";
}

void Document::end_group() { body_ << "</g>\n"; }

std::string Document::str() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_)
      << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' '
      << num(height_) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

void Document::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << str();
  if (!out) throw IoError("write failed for " + path);
}

Axes::Axes(double x0, double y0, double width, double height, double xmin, double xmax,
           double ymin, double ymax)
    : x0_(x0), y0_(y0), w_(width), h_(height), xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
  if (!(xmax_ > xmin_)) xmax_ = xmin_ + 1.0;
  if (!(ymax_ > ymin_)) ymax_ = ymin_ + 1.0;
}

double Axes::px(double x) const { return x0_ + (x - xmin_) / (xmax_ - xmin_) * w_; }
double Axes::py(double y) const { return y0_ + h_ - (y - ymin_) / (ymax_ - ymin_) * h_; }

void Axes::draw(Document& doc, const std::string& xlabel, const std::string& ylabel) const {
  const Style frame{"none", "#333333", 1.0};
  doc.rect(x0_, y0_, w_, h_, frame);
  const Style tick{"none", "#333333", 1.0};

  const double xs = nice_step(xmin_, xmax_);
  for (double v = std::ceil(xmin_ / xs) * xs; v <= xmax_ + 1e-9 * xs; v += xs) {
    doc.line(px(v), y0_ + h_, px(v), y0_ + h_ + 4, tick);
    doc.text(px(v), y0_ + h_ + 15, tick_label(v, xs), 9, "middle");
  }
  const double ys = nice_step(ymin_, ymax_);
  for (double v = std::ceil(ymin_ / ys) * ys; v <= ymax_ + 1e-9 * ys; v += ys) {
    doc.line(x0_ - 4, py(v), x0_, py(v), tick);
    doc.text(x0_ - 6, py(v) + 3, tick_label(v, ys), 9, "end");
  }
  doc.text(x0_ + w_ / 2, y0_ + h_ + 30, xlabel, 10, "middle");
  doc.text(x0_ - 36, y0_ + h_ / 2, ylabel, 10, "middle", "black", -90.0);
}

double nice_step(double lo, double hi, int target) {
  const double raw = (hi - lo) / std::max(1, target);
  if (!(raw > 0.0) || !std::isfinite(raw)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  const double nice = frac < 1.5 ? 1.0 : frac < 3.0 ? 2.0 : frac < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

}  // namespace wscan::svg
