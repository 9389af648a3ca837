#pragma once

#include <span>
#include <string>
#include <string_view>

#include "batchsim/analysis.hpp"

namespace batchsim {

struct BoxGlyph {
  std::string scheduler;
  BoxplotStats stats;
};

/// Box-and-whisker chart, one glyph per scheduler in the given order.
///
/// Geometry (viewBox 0 0 800 480): the plot area spans x in [80, 780] and
/// y in [40, 400]. Glyph i is centred at 80 + (i + 0.5) * 700 / count with a
/// box 40% of its slot wide. The value axis is linear from the smallest to
/// the largest of all whiskers and outliers, padded by 5% each side, with
/// five labelled ticks. Outliers are r=3 circles. Under each glyph sits its
/// legend number and scheduler id.
std::string boxplot_svg(std::string_view title, std::span<const BoxGlyph> glyphs);

}  // namespace batchsim
