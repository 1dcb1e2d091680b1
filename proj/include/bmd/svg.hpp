#pragma once

// SVG figures of a solution.
//
// Body plane: the body, the inscribed ellipse and its d2-scaled copy, with the
// extremal points (squares) and contact points (diamonds). Image plane: the
// image of the body under T_hat between the unit circle and the circle of
// radius d2. Each ellipse layer is one <circle> under a matrix transform.
// Coordinates are printed with 4 decimals so output bytes are stable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "bmd/ellipse.hpp"
#include "bmd/error.hpp"
#include "bmd/report.hpp"
#include "bmd/vec2.hpp"

namespace bmd {

enum class SvgView { body, image };

inline SvgView parse_view(std::string_view s) {
  if (s == "body") return SvgView::body;
  if (s == "image") return SvgView::image;
  throw Error(ErrorCode::InvalidInput, "view must be 'body' or 'image'");
}

namespace detail {

inline constexpr double canvas = 800.0;

inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

class SvgWriter {
 public:
  explicit SvgWriter(double extent) : scale_(0.45 * canvas / extent) {
    out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" "
            "viewBox=\"0 0 800 800\">\n";
    out_ += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
  }

  // Model y points up; SVG y points down.
  double sx(double x) const { return 0.5 * canvas + scale_ * x; }
  double sy(double y) const { return 0.5 * canvas - scale_ * y; }

  void open_layer(std::string_view id) { out_ += "<g id=\"" + std::string(id) + "\">\n"; }
  void close_layer() { out_ += "</g>\n"; }

  void polygon(const std::vector<Vec2>& pts, std::string_view stroke) {
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d += (i == 0 ? "M" : " L") + fixed4(sx(pts[i].x)) + "," + fixed4(sy(pts[i].y));
    }
    d += " Z";
    out_ += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"2\"/>\n";
  }

  /// Image of the unit circle under the linear map m, drawn as one circle element.
  void ellipse(const PDMatrix2& m, double radius, std::string_view stroke, std::string_view dash) {
    // Canvas map: (x, y) -> (sx(x), sy(y)) composed with m, scaled by radius.
    const double s = scale_ * radius;
    out_ += "<circle cx=\"0\" cy=\"0\" r=\"1\" transform=\"matrix(" + fixed4(s * m.m11()) + " " +
            fixed4(-s * m.m12()) + " " + fixed4(s * m.m12()) + " " + fixed4(-s * m.m22()) + " " +
            fixed4(0.5 * canvas) + " " + fixed4(0.5 * canvas) + ")\" fill=\"none\" stroke=\"" + std::string(stroke) +
            "\" stroke-width=\"2\" vector-effect=\"non-scaling-stroke\"";
    if (!dash.empty()) out_ += " stroke-dasharray=\"" + std::string(dash) + "\"";
    out_ += "/>\n";
  }

  void square_marker(Vec2 p, std::string_view fill) {
    out_ += "<rect x=\"" + fixed4(sx(p.x) - 5.0) + "\" y=\"" + fixed4(sy(p.y) - 5.0) +
            "\" width=\"10\" height=\"10\" fill=\"" + std::string(fill) + "\"/>\n";
  }

  void diamond_marker(Vec2 p, std::string_view fill) {
    const double x = sx(p.x);
    const double y = sy(p.y);
    out_ += "<path d=\"M" + fixed4(x) + "," + fixed4(y - 6.0) + " L" + fixed4(x + 6.0) + "," + fixed4(y) + " L" +
            fixed4(x) + "," + fixed4(y + 6.0) + " L" + fixed4(x - 6.0) + "," + fixed4(y) + " Z\" fill=\"" +
            std::string(fill) + "\"/>\n";
  }

  void label(Vec2 p, std::string_view text) {
    out_ += "<text x=\"" + fixed4(sx(p.x) + 8.0) + "\" y=\"" + fixed4(sy(p.y) - 8.0) +
            "\" font-family=\"sans-serif\" font-size=\"16\">" + std::string(text) + "</text>\n";
  }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  double scale_;
  std::string out_;
};

inline void markers(SvgWriter& w, const std::array<Vec2, 2>& x, const std::array<Vec2, 2>& y) {
  w.open_layer("extremal-points");
  for (std::size_t i = 0; i < 2; ++i) {
    w.square_marker(x[i], "crimson");
    w.square_marker(-x[i], "crimson");
    w.label(x[i], "x" + std::to_string(i + 1));
  }
  w.close_layer();
  w.open_layer("contact-points");
  for (std::size_t i = 0; i < 2; ++i) {
    w.diamond_marker(y[i], "seagreen");
    w.diamond_marker(-y[i], "seagreen");
    w.label(y[i], "y" + std::to_string(i + 1));
  }
  w.close_layer();
}

}  // namespace detail

inline std::string render_svg(const SolveReport& rep, SvgView view) {
  if (view == SvgView::body) {
    double extent = rep.d2 * rep.T_tilde.norm();
    for (const Vec2& p : rep.outline) extent = std::max(extent, norm(p));
    detail::SvgWriter w(extent);
    w.open_layer("body");
    w.polygon(rep.outline, "black");
    w.close_layer();
    w.open_layer("inscribed-ellipse");
    w.ellipse(rep.T_tilde, 1.0, "steelblue", "");
    w.close_layer();
    w.open_layer("scaled-ellipse");
    w.ellipse(rep.T_tilde, rep.d2, "steelblue", "8 6");
    w.close_layer();
    detail::markers(w, rep.x_points, rep.y_points);
    return w.finish();
  }

  std::vector<Vec2> image;
  image.reserve(rep.outline.size());
  double extent = rep.d2;
  for (const Vec2& p : rep.outline) {
    image.push_back(rep.T_hat.apply(p));
    extent = std::max(extent, norm(image.back()));
  }
  detail::SvgWriter w(extent);
  w.open_layer("image-body");
  w.polygon(image, "black");
  w.close_layer();
  w.open_layer("unit-circle");
  w.ellipse(PDMatrix2::identity(), 1.0, "steelblue", "");
  w.close_layer();
  w.open_layer("outer-circle");
  w.ellipse(PDMatrix2::identity(), rep.d2, "steelblue", "8 6");
  w.close_layer();
  detail::markers(w, {rep.T_hat.apply(rep.x_points[0]), rep.T_hat.apply(rep.x_points[1])},
                  {rep.T_hat.apply(rep.y_points[0]), rep.T_hat.apply(rep.y_points[1])});
  return w.finish();
}

}  // namespace bmd
