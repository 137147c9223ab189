#include "aaipp/vtk.hpp"

#include <ostream>

namespace aaipp::fem {

void write_vtk_fields(const FeSpace& s, std::span<const double> velocity,
                      const PressureField* pressure, std::ostream& os) {
  if (velocity.size() != static_cast<std::size_t>(s.num_vector()))
    throw linalg::DimensionError("velocity has the wrong length for VTK export");
  const auto ncells = s.num_elements();
  os << "# vtk DataFile Version 3.0\naaipp P2 fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os.precision(17);
  os << "POINTS " << s.num_scalar() << " double\n";
  for (Index i = 0; i < s.num_scalar(); ++i) os << s.node(i).x << ' ' << s.node(i).y << " 0\n";
  os << "CELLS " << ncells << ' ' << 7 * ncells << '\n';
  for (std::size_t t = 0; t < ncells; ++t) {
    const auto& en = s.element_nodes(t);
    os << '6';
    for (Index n : en) os << ' ' << n;
    os << '\n';
  }
  os << "CELL_TYPES " << ncells << '\n';
  for (std::size_t t = 0; t < ncells; ++t) os << "22\n";

  os << "POINT_DATA " << s.num_scalar() << "\nVECTORS velocity double\n";
  for (Index i = 0; i < s.num_scalar(); ++i)
    os << velocity[FeSpace::dof(i, 0)] << ' ' << velocity[FeSpace::dof(i, 1)] << " 0\n";

  if (pressure != nullptr) {
    if (pressure->values.size() != static_cast<std::size_t>(s.num_vertices()))
      throw linalg::DimensionError("pressure has the wrong length for VTK export");
    os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (Index v = 0; v < s.num_vertices(); ++v) os << pressure->values[v] << '\n';
    for (const auto& e : s.edges()) os << 0.5 * (pressure->values[e[0]] + pressure->values[e[1]]) << '\n';
  }
}

}  // namespace aaipp::fem
