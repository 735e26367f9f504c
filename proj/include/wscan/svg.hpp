#ifndef WSCAN_SVG_HPP
#define WSCAN_SVG_HPP

#include <span>
#include <sstream>
#include <string>
#include <utility>

namespace wscan::svg {

struct Style {
  Style(std::string fill_ = "none", std::string stroke_ = "black", double width = 1.0,
        std::string dash_ = "", double opacity_ = 1.0)
      : fill(std::move(fill_)),
        stroke(std::move(stroke_)),
        stroke_width(width),
        dash(std::move(dash_)),
        opacity(opacity_) {}

  std::string fill;
  std::string stroke;
  double stroke_width;
  std::string dash;  // stroke-dasharray, empty for solid
  double opacity;
};

/// Minimal SVG 1.1 writer for static plots.
class Document {
 public:
  Document(double width, double height);

  void rect(double x, double y, double w, double h, const Style& style);
  void line(double x1, double y1, double x2, double y2, const Style& style);
  void polyline(std::span<const std::pair<double, double>> points, const Style& style);
  void circle(double cx, double cy, double r, const Style& style);
  /// anchor: "start", "middle" or "end".
  void text(double x, double y, const std::string& content, double size = 11.0,
            const std::string& anchor = "start", const std::string& color = "black",
            double rotate = 0.0);
  void begin_group(double dx, double dy);
  void end_group();

  std::string str() const;
  void save(const std::string& path) const;

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

/// Linear map from a data rectangle onto a pixel rectangle (y grows downward).
class Axes {
 public:
  Axes(double x0, double y0, double width, double height, double xmin, double xmax, double ymin,
       double ymax);

  double px(double x) const;
  double py(double y) const;
  double left() const noexcept { return x0_; }
  double top() const noexcept { return y0_; }
  double width() const noexcept { return w_; }
  double height() const noexcept { return h_; }

  /// Frame, ticks, tick labels and axis titles.
  void draw(Document& doc, const std::string& xlabel, const std::string& ylabel) const;

 private:
  double x0_, y0_, w_, h_;
  double xmin_, xmax_, ymin_, ymax_;
};

/// Round number step giving about `target` intervals over [lo, hi].
double nice_step(double lo, double hi, int target = 5);

}  // namespace wscan::svg

#endif  // WSCAN_SVG_HPP
