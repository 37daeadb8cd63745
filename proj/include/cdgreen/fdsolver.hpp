#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cdgreen/coefficients.hpp"
#include "cdgreen/geometry.hpp"
#include "cdgreen/mesh.hpp"

namespace cdg::fd {

enum class BoundaryCondition { dirichlet, neumann_top_bottom };
enum class OperatorKind { primal, adjoint };

std::string_view to_string(BoundaryCondition bc);
BoundaryCondition boundary_condition_from_string(std::string_view name);

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Bilinear interpolant of nodal values on the full mesh (boundary included).
struct NodalField {
  std::shared_ptr<const TensorMesh> mesh;
  std::vector<double> values;  // (nx+1)(ny+1), x fastest

  double node(int i, int j) const {
    return values[static_cast<std::size_t>(j) * (mesh->x.size()) + static_cast<std::size_t>(i)];
  }
  double at(Point p) const;
};

// Upwind finite-volume discretisation of
//   L u = -eps (u_xx + u_yy) - (a u)_x + b u
// on a tensor mesh with the convective flux taken from the downwind-in-x
// (upwind for the velocity -a) node. The finite-volume matrix A satisfies
// A u = f * area; the finite-difference form of L is diag(area)^-1 A and that
// of the adjoint L* = -eps Lap + a d_x + b is diag(area)^-1 A^T.
//
// Dirichlet unknowns are the interior nodes; neumann_top_bottom adds the
// nodes on y = 0 and y = 1 with half dual cells and zero diffusive flux.
class System {
 public:
  System(std::shared_ptr<const CoefficientField> field, std::shared_ptr<const TensorMesh> mesh,
         double eps, BoundaryCondition bc, bool parallel = true);

  int unknowns() const { return static_cast<int>(node_i_.size()); }
  // unknown index of node (i, j), or -1 for an eliminated boundary node
  int index(int i, int j) const;
  Point point(int k) const;
  double area(int k) const { return area_[static_cast<std::size_t>(k)]; }
  const Vector& areas() const { return area_; }
  int nearest_unknown(Point p) const;

  const SparseMatrix& fv_matrix() const { return a_; }
  SparseMatrix fd_matrix(OperatorKind op) const;
  // finite-difference operator applied to nodal values of the unknowns
  Vector apply(OperatorKind op, const Vector& u) const;

  // Solves L u = f (primal) or L* v = f (adjoint) for nodal f; the relative
  // residual is checked against 1e-10.
  Vector solve(OperatorKind op, const Vector& f) const;
  // Adjoint solve with a unit mass on the dual cell of unknown k.
  Vector discrete_green(int k) const;

  // Nodal f samples at the unknowns.
  Vector sample(const std::function<double(Point)>& f) const;
  NodalField to_nodal(const Vector& u) const;

  double eps() const { return eps_; }
  BoundaryCondition bc() const { return bc_; }
  const TensorMesh& mesh() const { return *mesh_; }
  const CoefficientField& field() const { return *field_; }
  double last_relative_residual() const { return last_residual_; }

 private:
  void assemble(bool parallel);
  void check_m_matrix() const;
  void factorize() const;

  std::shared_ptr<const CoefficientField> field_;
  std::shared_ptr<const TensorMesh> mesh_;
  double eps_;
  BoundaryCondition bc_;
  std::vector<int> node_i_, node_j_;
  std::vector<int> index_;
  Vector area_;
  SparseMatrix a_;
  mutable std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_;
  mutable double last_residual_ = 0.0;
};

// Largest nodal value of the discrete solution with f = 1; equals the maximum
// over sources of sum G_h * area.
struct MassReport {
  double max_mass = 0.0;
  Point argmax{};
  double bound = 0.0;  // 1/alpha
};
MassReport mass_bound(const System& sys);

// Integral of |a - b| and of |b| over the cells of `cells`, 3x3 Gauss per
// cell. Cells touching `singular` are subdivided 16 x 16.
struct L1Comparison {
  double diff = 0.0;
  double ref = 0.0;
  double relative() const { return diff / ref; }
};
L1Comparison l1_compare(const std::function<double(Point)>& a,
                        const std::function<double(Point)>& b, const TensorMesh& cells,
                        const Point* singular = nullptr, bool parallel = true);

// f = d_x F1 + d_y F2 with analytic derivatives supplied.
struct DivergenceData {
  std::function<double(Point)> F1, F1_x, F2, F2_y;
};

struct AprioriRow {
  double eps = 0.0;
  double u_max = 0.0;
  double F1_max = 0.0;
  double F2_max = 0.0;
  double bound = 0.0;  // (1 + |ln eps|) |F1| + eps^{-1/2} |F2|
  double ratio = 0.0;  // u_max / bound
  double u_sqrt_eps = 0.0;
  double u_over_log = 0.0;
};

std::vector<AprioriRow> apriori_check(std::shared_ptr<const CoefficientField> field,
                                      const DivergenceData& data, const std::vector<double>& eps,
                                      MeshKind mesh_kind, int n);

// Discrete Green's function of the 1-D adjoint operator -eps v'' + a v' on a
// uniform mesh of [0,1] with N cells, homogeneous Dirichlet data, backward
// differences for v'. Returns the largest discrete total variation over all
// interior sources.
struct Gamma1dResult {
  double max_variation = 0.0;
  double argmax_source = 0.0;
  double bound = 0.0;  // 2/alpha
};
Gamma1dResult gamma_1d_check(const std::function<double(double)>& a, double alpha, double eps,
                             int n, bool parallel = true);

}  // namespace cdg::fd
