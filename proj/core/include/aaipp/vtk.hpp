#pragma once

#include <iosfwd>
#include <span>

#include "aaipp/assembly.hpp"

namespace aaipp::fem {

/// Legacy ASCII VTK unstructured grid of quadratic triangles (cell type 22)
/// carrying the P2 velocity as point vectors and, if given, the P1 pressure
/// (linearly interpolated to edge midpoints) as point scalars.
void write_vtk_fields(const FeSpace& s, std::span<const double> velocity,
                      const PressureField* pressure, std::ostream& os);

}  // namespace aaipp::fem
