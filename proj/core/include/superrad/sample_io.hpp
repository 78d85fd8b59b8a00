#pragma once

#include <filesystem>
#include <iosfwd>

#include "superrad/geometry.hpp"

namespace superrad {

// Plain-text sample table:
//
//   # superrad-sample 1
//   # k0 <kx> <ky> <kz>          (rad/um)
//   # gamma1 <value>             (us^-1)
//   <x> <y> <z>                  (um, one atom per line)
//
// Blank lines and other '#' lines are ignored. Numbers round-trip exactly.

void write_sample(std::ostream& out, const SampleGeometry& sample);
void write_sample(const std::filesystem::path& path, const SampleGeometry& sample);

SampleGeometry read_sample(std::istream& in,
                           CoincidencePolicy coincidence = CoincidencePolicy::reject);
SampleGeometry read_sample(const std::filesystem::path& path,
                           CoincidencePolicy coincidence = CoincidencePolicy::reject);

}  // namespace superrad
