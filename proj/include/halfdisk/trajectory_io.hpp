#pragma once

#include <string>
#include <vector>

#include "halfdisk/expmap.hpp"

namespace halfdisk {

/// Shortest-exact decimal form: 17 significant digits round-trip any double.
std::string format_double(double v);

/// CSV with the fixed column order t,x,y,theta,u1,u2,h1,h2,h3 and one header
/// line. Re-serializing a parsed file reproduces it byte for byte.
std::string to_csv(const std::vector<TrajectorySample>& samples);

/// Parses the CSV produced by to_csv. Throws std::invalid_argument on a
/// malformed header or row.
std::vector<TrajectorySample> parse_csv(const std::string& text);

/// JSON object with the total time and the sample array.
std::string to_json(const std::vector<TrajectorySample>& samples);

/// Standalone SVG 1.1 document: the planar path, with heading ticks at
/// multiples of tick_spacing in time. The viewport fits the path with a 5%
/// margin. Output is deterministic for a fixed input.
std::string to_svg(const std::vector<TrajectorySample>& samples,
                   double tick_spacing = 0.5);

}  // namespace halfdisk
