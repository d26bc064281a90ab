#pragma once

#include <memory>
#include <string>

#include "isosurf/chart.hpp"

namespace isosurf {

/// Chart definition files are JSON documents:
///
///   {
///     "label": "clifford-s3",
///     "ambient": {"kind": "sphere", "dim": 3},
///     "domain": {"u": [0, 6.283185307179586], "v": [0, 6.283185307179586]},
///     "periods": [[6.283185307179586, 0], [0, 6.283185307179586]],
///     "formula": {"scale": 0.7071067811865476,
///                 "components": [{"cos": "u"}, {"sin": "u"}, {"cos": "v"}, {"sin": "v"}]}
///   }
///
/// Expressions are numbers, the strings "u", "v", "pi", or single-key
/// objects: add/mul (list), sub/div (pair), neg/sin/cos/exp/sqrt (one
/// argument), pow ([expr, integer]). "formula" may also carry "linear", a
/// row-major matrix applied to the components before scaling.
std::shared_ptr<const FormulaChart> parse_chart_definition(const std::string& text);
std::shared_ptr<const FormulaChart> load_chart_file(const std::string& path);
std::string chart_definition(const FormulaChart& chart);

}  // namespace isosurf
