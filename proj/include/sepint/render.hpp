#pragma once

#include <string>

#include "sepint/configuration.hpp"

namespace sepint {

// Static SVG depiction of a snapshot: color-coded filled circles on the
// lattice. Pure function of the configuration (stable output for stable
// input); coordinates are canonically translated first.
std::string render_svg(const Configuration& c);

}  // namespace sepint
