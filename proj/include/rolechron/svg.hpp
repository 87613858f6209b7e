#ifndef ROLECHRON_SVG_HPP
#define ROLECHRON_SVG_HPP

#include <iosfwd>
#include <span>
#include <string>

#include "rolechron/align.hpp"

namespace rolechron {

/// Scatter of a 2-D projection, one colour per window tag.
void write_projection_svg(std::ostream& out, const PcaProjection& projection, const std::string& title);

struct Bar {
  std::string label;
  std::string group;  // bars sharing a group share a colour
  double value = 0.0;
};

void write_bar_chart_svg(std::ostream& out, std::span<const Bar> bars, const std::string& title,
                         const std::string& y_label);

}  // namespace rolechron

#endif
