// Field files: <stem>.bin holds little-endian float64 values in storage order
// (time level outermost); <stem>.json holds the geometry header.
#pragma once

#include <string>

#include "gseq/grid.hpp"

namespace gseq {

void write_field(const std::string& stem, const SpaceTimeField& u);
SpaceTimeField read_field(const std::string& stem);

std::string geometry_json(const GridGeometry& g);
GridGeometry geometry_from_json(const std::string& text);

/// CSV with header x1,...,xn,u; one row per spatial point of a time level.
void write_csv_slice(const std::string& path, const SpaceTimeField& u, int level);

}  // namespace gseq
