#include "rolechron/svg.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include <fmt/format.h>

namespace rolechron {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
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

void write_projection_svg(std::ostream& out, const PcaProjection& projection, const std::string& title) {
  constexpr double W = 480, H = 480, M = 40;
  const auto& xy = projection.coords;
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  if (xy.rows() > 0) {
    x0 = xy.col(0).minCoeff();
    x1 = xy.col(0).maxCoeff();
    y0 = xy.col(1).minCoeff();
    y1 = xy.col(1).maxCoeff();
  }
  const double sx = (W - 2 * M) / std::max(x1 - x0, 1e-12);
  const double sy = (H - 2 * M) / std::max(y1 - y0, 1e-12);

  std::map<int, std::size_t> colour;
  for (const auto& k : projection.keys) colour.try_emplace(k.window, colour.size());

  out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", W, H);
  out << fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", W / 2,
                     escape(title));
  out << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n", M, M,
                     W - 2 * M, H - 2 * M);
  for (Eigen::Index i = 0; i < xy.rows(); ++i) {
    const auto& key = projection.keys[static_cast<std::size_t>(i)];
    out << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.7\"><title>{} {}</title></circle>\n",
                       M + (xy(i, 0) - x0) * sx, H - M - (xy(i, 1) - y0) * sy, kPalette[colour[key.window] % 6],
                       escape(key.user), window_tag(key.window));
  }
  double ly = M + 14;
  for (const auto& [window, c] : colour) {
    out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{}\">{}</text>\n", W - M - 30, ly,
                       kPalette[c % 6], window_tag(window));
    ly += 14;
  }
  out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">PC1 ({:.1f}%)</text>\n", W / 2,
                     H - 10, 100 * projection.explained(0));
  out << fmt::format("<text x=\"12\" y=\"{}\" font-size=\"11\" transform=\"rotate(-90 12 {})\">PC2 ({:.1f}%)</text>\n",
                     H / 2, H / 2, 100 * projection.explained(1));
  out << "</svg>\n";
}

void write_bar_chart_svg(std::ostream& out, std::span<const Bar> bars, const std::string& title,
                         const std::string& y_label) {
  constexpr double H = 360, M = 50, bar_w = 18, gap = 6;
  const double W = std::max(320.0, 2 * M + static_cast<double>(bars.size()) * (bar_w + gap));
  double top = 0.0;
  for (const auto& b : bars) top = std::max(top, b.value);
  if (top <= 0.0) top = 1.0;

  std::map<std::string, std::size_t> colour;
  for (const auto& b : bars) colour.try_emplace(b.group, colour.size());

  out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", W, H + 120);
  out << fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", W / 2,
                     escape(title));
  out << fmt::format("<text x=\"12\" y=\"{}\" font-size=\"11\" transform=\"rotate(-90 12 {})\">{}</text>\n", H / 2,
                     H / 2, escape(y_label));
  out << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333\"/>\n", M, H - M, W - M / 2, H - M);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& b = bars[i];
    const double h = (H - 2 * M) * std::max(0.0, b.value) / top;
    const double x = M + static_cast<double>(i) * (bar_w + gap);
    out << fmt::format("<rect x=\"{:.1f}\" y=\"{:.2f}\" width=\"{}\" height=\"{:.2f}\" fill=\"{}\"><title>{} {:.4f}</title></rect>\n",
                       x, H - M - h, bar_w, h, kPalette[colour[b.group] % 6], escape(b.label), b.value);
    out << fmt::format("<text x=\"{:.1f}\" y=\"{}\" font-size=\"9\" transform=\"rotate(60 {:.1f} {})\">{}</text>\n",
                       x + 4, H - M + 12, x + 4, H - M + 12, escape(b.label));
  }
  double ly = M;
  for (const auto& [group, c] : colour) {
    out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{}\">{}</text>\n", W - M - 40, ly,
                       kPalette[c % 6], escape(group));
    ly += 14;
  }
  out << "</svg>\n";
}

}  // namespace rolechron
