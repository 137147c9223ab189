#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "aaipp/fe_space.hpp"

namespace aaipp::fem {

// All vector operators share FeSpace::vector_pattern(), so they can be
// combined with CsrMatrix::add_scaled without re-merging patterns.

/// (u, v)
CsrMatrix assemble_mass(const FeSpace& s);
/// (grad u, grad v)
CsrMatrix assemble_stiffness(const FeSpace& s);
/// (div u, div v)
CsrMatrix assemble_graddiv(const FeSpace& s);
/// Skew-symmetrized convection: row i, column j holds
/// 1/2 (w . grad phi_j, phi_i) - 1/2 (w . grad phi_i, phi_j).
CsrMatrix assemble_convection(const FeSpace& s, std::span<const double> w);
/// Adds scale * N(w) into target (which must carry the vector pattern).
void add_convection(const FeSpace& s, std::span<const double> w, double scale, CsrMatrix& target);
/// F_i = (f, phi_i)
std::vector<double> assemble_load(const FeSpace& s, const VectorField& f);

/// Continuous P1 mass matrix on the mesh vertices.
CsrMatrix assemble_p1_mass(const FeSpace& s);
/// B_{ij} = (div phi_j, psi_i) with psi_i the P1 hat function of vertex i.
CsrMatrix assemble_p1_divergence(const FeSpace& s);

/// Symmetric elimination of Dirichlet constraints: constrained rows and
/// columns become unit rows/columns, b is lifted (b <- b - A g on free dofs,
/// b_i = g_i on constrained ones). The sparsity pattern is preserved.
std::pair<CsrMatrix, std::vector<double>> apply_dirichlet(CsrMatrix a, std::vector<double> b,
                                                          const DirichletData& bc);
void apply_dirichlet_in_place(CsrMatrix& a, std::vector<double>& b, const DirichletData& bc);

double l2_norm(const FeSpace& s, std::span<const double> v);
double h1_seminorm(const FeSpace& s, std::span<const double> v);
double divergence_l2(const FeSpace& s, std::span<const double> v);

/// Quadratic-form norms against pre-assembled operators.
double energy_norm(const CsrMatrix& a, std::span<const double> v);

/// Errors against an exact field, integrated elementwise with the degree-5 rule.
double l2_error(const FeSpace& s, std::span<const double> v, const VectorField& exact);
double h1_error(const FeSpace& s, std::span<const double> v,
                const std::function<Grad2(double, double)>& exact_gradient);
double p1_l2_error(const FeSpace& s, std::span<const double> q, const ScalarField& exact);

/// Continuous P1 pressure on mesh vertices with zero mean.
struct PressureField {
  std::vector<double> values;
};

/// Global L2 projection into continuous P1: solves M_p q = -acc and removes
/// the mean. `acc` is a dual vector tested against P1 hat functions.
class PressureProjector {
 public:
  explicit PressureProjector(const FeSpace& s);
  ~PressureProjector();
  PressureProjector(PressureProjector&&) noexcept;
  PressureProjector& operator=(PressureProjector&&) noexcept;

  PressureField project(std::span<const double> acc) const;
  const CsrMatrix& mass() const { return mass_; }
  double mean(std::span<const double> q) const;
  double l2_norm(std::span<const double> q) const;

 private:
  CsrMatrix mass_;
  std::unique_ptr<linalg::SparseLu> lu_;
  double area_ = 0.0;
};

PressureField pressure_project(const FeSpace& s, std::span<const double> acc);

}  // namespace aaipp::fem
