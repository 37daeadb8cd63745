#include "cdgreen/fdsolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace cdg::fd {

std::string_view to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann_top_bottom";
}

BoundaryCondition boundary_condition_from_string(std::string_view name) {
  if (name == "dirichlet") return BoundaryCondition::dirichlet;
  if (name == "neumann_top_bottom" || name == "neumann") return BoundaryCondition::neumann_top_bottom;
  throw std::invalid_argument("unknown boundary condition '" + std::string(name) + "'");
}

double NodalField::at(Point p) const {
  int i = 0, j = 0;
  mesh->locate(p, i, j);
  const double tx = (p.x - mesh->x[i]) / (mesh->x[i + 1] - mesh->x[i]);
  const double ty = (p.y - mesh->y[j]) / (mesh->y[j + 1] - mesh->y[j]);
  return (1 - tx) * (1 - ty) * node(i, j) + tx * (1 - ty) * node(i + 1, j) +
         (1 - tx) * ty * node(i, j + 1) + tx * ty * node(i + 1, j + 1);
}

System::System(std::shared_ptr<const CoefficientField> field,
               std::shared_ptr<const TensorMesh> mesh, double eps, BoundaryCondition bc,
               bool parallel)
    : field_(std::move(field)), mesh_(std::move(mesh)), eps_(eps), bc_(bc) {
  if (!field_ || !mesh_) throw std::invalid_argument("System: null field or mesh");
  if (!(eps_ > 0.0 && eps_ <= 1.0)) throw std::domain_error("System: eps must lie in (0,1]");
  const int nx = mesh_->nx(), ny = mesh_->ny();
  index_.assign((nx + 1) * (ny + 1), -1);
  const int j0 = bc_ == BoundaryCondition::dirichlet ? 1 : 0;
  const int j1 = bc_ == BoundaryCondition::dirichlet ? ny - 1 : ny;
  for (int j = j0; j <= j1; ++j) {
    for (int i = 1; i < nx; ++i) {
      index_[j * (nx + 1) + i] = static_cast<int>(node_i_.size());
      node_i_.push_back(i);
      node_j_.push_back(j);
    }
  }
  assemble(parallel);
  check_m_matrix();
}

int System::index(int i, int j) const {
  const int nx = mesh_->nx(), ny = mesh_->ny();
  if (i < 0 || i > nx || j < 0 || j > ny) return -1;
  return index_[j * (nx + 1) + i];
}

Point System::point(int k) const {
  return {mesh_->x[node_i_[k]], mesh_->y[node_j_[k]]};
}

int System::nearest_unknown(Point p) const {
  const int k = index(TensorMesh::nearest(mesh_->x, p.x), TensorMesh::nearest(mesh_->y, p.y));
  if (k < 0) throw std::domain_error("System: probe point is not near an unknown node");
  return k;
}

void System::assemble(bool parallel) {
  const std::vector<double>& x = mesh_->x;
  const std::vector<double>& y = mesh_->y;
  const int ny = mesh_->ny();
  const int n = unknowns();
  area_.resize(n);

  struct Entry {
    int col;
    double v;
  };
  std::vector<std::array<Entry, 5>> rows(n);
  std::vector<int> counts(n, 0);

#pragma omp parallel for schedule(static) if (parallel)
  for (int k = 0; k < n; ++k) {
    const int i = node_i_[k], j = node_j_[k];
    const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
    const double hd = j > 0 ? y[j] - y[j - 1] : 0.0;
    const double hu = j < ny ? y[j + 1] - y[j] : 0.0;
    const double wx = 0.5 * (hl + hr), wy = 0.5 * (hd + hu);
    area_[k] = wx * wy;

    std::array<Entry, 5>& row = rows[k];
    int& cnt = counts[k];
    double diag = 0.0;
    auto couple = [&](int ii, int jj, double c) {
      const int col = index(ii, jj);
      if (col >= 0 && c != 0.0) row[cnt++] = {col, -c};
    };
    const double cl = eps_ * wy / hl, cr = eps_ * wy / hr;
    diag += cl + cr;
    couple(i - 1, j, cl);
    if (j > 0) {
      const double cd = eps_ * wx / hd;
      diag += cd;
      couple(i, j - 1, cd);
    }
    if (j < ny) {
      const double cu = eps_ * wx / hu;
      diag += cu;
      couple(i, j + 1, cu);
    }
    // -(a u)_x with flux -a u taken from the right node
    diag += field_->a({x[i], y[j]}) * wy;
    couple(i + 1, j, cr + field_->a({x[i + 1], y[j]}) * wy);
    diag += field_->b({x[i], y[j]}) * area_[k];
    row[cnt++] = {k, diag};
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  for (int k = 0; k < n; ++k) {
    for (int e = 0; e < counts[k]; ++e) {
      const Entry& en = rows[k][e];
      trip.emplace_back(k, en.col, en.v);
    }
  }
  a_.resize(n, n);
  a_.setFromTriplets(trip.begin(), trip.end());
  a_.makeCompressed();
}

void System::check_m_matrix() const {
  for (int col = 0; col < a_.outerSize(); ++col) {
    double sum = 0.0, diag = 0.0, scale = 0.0;
    for (SparseMatrix::InnerIterator it(a_, col); it; ++it) {
      sum += it.value();
      scale = std::max(scale, std::abs(it.value()));
      if (it.row() == col) {
        diag = it.value();
      } else if (it.value() > 0.0) {
        throw AssemblyError("assembly: positive off-diagonal entry at (" +
                            std::to_string(it.row()) + "," + std::to_string(col) + ")");
      }
    }
    if (!(diag > 0.0)) throw AssemblyError("assembly: non-positive diagonal in column " +
                                           std::to_string(col));
    if (sum < -1e-12 * scale) {
      throw AssemblyError("assembly: column " + std::to_string(col) +
                          " is not diagonally dominant (M-matrix check)");
    }
  }
}

SparseMatrix System::fd_matrix(OperatorKind op) const {
  const Vector inv = area_.cwiseInverse();
  if (op == OperatorKind::primal) return inv.asDiagonal() * a_;
  const SparseMatrix at = a_.transpose();
  return inv.asDiagonal() * at;
}

Vector System::apply(OperatorKind op, const Vector& u) const {
  if (u.size() != unknowns()) throw std::invalid_argument("apply: size mismatch");
  const Vector r = op == OperatorKind::primal ? Vector(a_ * u) : Vector(a_.transpose() * u);
  return r.cwiseQuotient(area_);
}

void System::factorize() const {
  if (lu_) return;
  auto lu = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
  lu->analyzePattern(a_);
  lu->factorize(a_);
  if (lu->info() != Eigen::Success) {
    throw SolveError("sparse LU factorisation failed: " + lu->lastErrorMessage());
  }
  lu_ = std::move(lu);
}

Vector System::solve(OperatorKind op, const Vector& f) const {
  if (f.size() != unknowns()) throw std::invalid_argument("solve: size mismatch");
  factorize();
  const Vector rhs = f.cwiseProduct(area_);
  Vector u = op == OperatorKind::primal ? Vector(lu_->solve(rhs))
                                        : Vector(lu_->transpose().solve(rhs));
  if (!u.allFinite()) throw SolveError("solve: non-finite solution");
  const Vector res =
      (op == OperatorKind::primal ? Vector(a_ * u) : Vector(a_.transpose() * u)) - rhs;
  double norm_a = 0.0;
  for (int c = 0; c < a_.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a_, c); it; ++it) s += std::abs(it.value());
    norm_a = std::max(norm_a, s);
  }
  const double denom = norm_a * u.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>();
  last_residual_ = denom > 0.0 ? res.lpNorm<Eigen::Infinity>() / denom : 0.0;
  if (last_residual_ > 1e-10) {
    throw SolveError("solve: relative residual " + std::to_string(last_residual_) +
                     " above 1e-10");
  }
  return u;
}

Vector System::discrete_green(int k) const {
  if (k < 0 || k >= unknowns()) throw std::out_of_range("discrete_green: bad source index");
  Vector f = Vector::Zero(unknowns());
  f[k] = 1.0 / area_[k];
  return solve(OperatorKind::adjoint, f);
}

Vector System::sample(const std::function<double(Point)>& f) const {
  Vector v(unknowns());
  for (int k = 0; k < unknowns(); ++k) v[k] = f(point(k));
  return v;
}

NodalField System::to_nodal(const Vector& u) const {
  NodalField nf;
  nf.mesh = mesh_;
  nf.values.assign(mesh_->x.size() * mesh_->y.size(), 0.0);
  const std::size_t stride = mesh_->x.size();
  for (int k = 0; k < unknowns(); ++k) {
    nf.values[node_j_[k] * stride + node_i_[k]] = u[k];
  }
  return nf;
}

MassReport mass_bound(const System& sys) {
  const Vector u = sys.solve(OperatorKind::primal, Vector::Ones(sys.unknowns()));
  Eigen::Index at = 0;
  MassReport r;
  r.max_mass = u.maxCoeff(&at);
  r.argmax = sys.point(static_cast<int>(at));
  r.bound = 1.0 / sys.field().alpha();
  return r;
}

L1Comparison l1_compare(const std::function<double(Point)>& a,
                        const std::function<double(Point)>& b, const TensorMesh& cells,
                        const Point* singular, bool parallel) {
  static constexpr std::array<double, 3> node = {-0.7745966692414833770358531, 0.0,
                                                 0.7745966692414833770358531};
  static constexpr std::array<double, 3> weight = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const int nx = cells.nx(), ny = cells.ny();
  std::vector<double> row_diff(ny, 0.0), row_ref(ny, 0.0);

#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (int j = 0; j < ny; ++j) {
    double d = 0.0, r = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double x0 = cells.x[i], x1 = cells.x[i + 1];
      const double y0 = cells.y[j], y1 = cells.y[j + 1];
      const bool touches = singular && singular->x >= x0 && singular->x <= x1 &&
                           singular->y >= y0 && singular->y <= y1;
      const int sub = touches ? 16 : 1;
      const double sx = (x1 - x0) / sub, sy = (y1 - y0) / sub;
      for (int p = 0; p < sub; ++p) {
        for (int q = 0; q < sub; ++q) {
          const double cx = x0 + (p + 0.5) * sx, cy = y0 + (q + 0.5) * sy;
          for (int u = 0; u < 3; ++u) {
            for (int v = 0; v < 3; ++v) {
              const Point pt{cx + 0.5 * sx * node[u], cy + 0.5 * sy * node[v]};
              const double w = weight[u] * weight[v] * 0.25 * sx * sy;
              const double bv = b(pt);
              d += w * std::abs(a(pt) - bv);
              r += w * std::abs(bv);
            }
          }
        }
      }
    }
    row_diff[j] = d;
    row_ref[j] = r;
  }
  L1Comparison out;
  for (int j = 0; j < ny; ++j) {
    out.diff += row_diff[j];
    out.ref += row_ref[j];
  }
  return out;
}

std::vector<AprioriRow> apriori_check(std::shared_ptr<const CoefficientField> field,
                                      const DivergenceData& data, const std::vector<double>& eps,
                                      MeshKind mesh_kind, int n) {
  if (eps.empty()) throw std::invalid_argument("apriori_check: empty eps list");
  if (!data.F1 || !data.F1_x || !data.F2 || !data.F2_y) {
    throw std::invalid_argument("apriori_check: F1, F2 and their derivatives are required");
  }
  std::vector<AprioriRow> rows;
  for (double e : eps) {
    auto mesh = std::make_shared<const TensorMesh>(TensorMesh::make(mesh_kind, n, e, field->alpha()));
    const System sys(field, mesh, e, BoundaryCondition::dirichlet);
    const Vector f = sys.sample([&](Point p) { return data.F1_x(p) + data.F2_y(p); });
    const Vector u = sys.solve(OperatorKind::primal, f);
    AprioriRow r;
    r.eps = e;
    r.u_max = u.lpNorm<Eigen::Infinity>();
    for (double xv : mesh->x) {
      for (double yv : mesh->y) {
        r.F1_max = std::max(r.F1_max, std::abs(data.F1({xv, yv})));
        r.F2_max = std::max(r.F2_max, std::abs(data.F2({xv, yv})));
      }
    }
    const double ln = std::abs(std::log(e));
    r.bound = (1.0 + ln) * r.F1_max + r.F2_max / std::sqrt(e);
    r.ratio = r.bound > 0.0 ? r.u_max / r.bound : 0.0;
    r.u_sqrt_eps = r.u_max * std::sqrt(e);
    r.u_over_log = r.u_max / (1.0 + ln);
    rows.push_back(r);
  }
  return rows;
}

Gamma1dResult gamma_1d_check(const std::function<double(double)>& a, double alpha, double eps,
                             int n, bool parallel) {
  if (n < 2) throw std::invalid_argument("gamma_1d_check: need at least 2 cells");
  if (!(eps > 0.0 && eps <= 1.0) || !(alpha > 0.0)) {
    throw std::domain_error("gamma_1d_check: need eps in (0,1] and alpha > 0");
  }
  const double h = 1.0 / n;
  const int m = n - 1;  // interior unknowns, node i = k + 1
  std::vector<double> lower(m), diag(m), upper(m);
  for (int k = 0; k < m; ++k) {
    const double ai = a((k + 1) * h);
    if (!(ai >= alpha)) throw std::domain_error("gamma_1d_check: a below alpha");
    lower[k] = -eps / (h * h) - ai / h;
    diag[k] = 2.0 * eps / (h * h) + ai / h;
    upper[k] = -eps / (h * h);
  }
  // forward elimination shared by every source
  std::vector<double> cprime(m), denom(m);
  for (int k = 0; k < m; ++k) {
    const double prev = k > 0 ? cprime[k - 1] : 0.0;
    denom[k] =
        diag[k] - lower[k] * prev;
    cprime[k] = upper[k] /
                                          denom[k];
  }

  std::vector<double> variation(m, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int s = 0; s < m; ++s) {
    std::vector<double> v(m, 0.0);
    for (int k = 0; k < m; ++k) {
      const double rhs = k == s ? 1.0 / h : 0.0;
      const double prev = k > 0 ? v[k - 1] : 0.0;
      v[k] =
          (rhs - lower[k] * prev) / denom[k];
    }
    for (int k = m - 2; k >= 0; --k) {
      v[k] -=
          cprime[k] * v[k + 1];
    }
    double tv = std::abs(v[0]) + std::abs(v[m - 1]);
    for (int k = 0; k + 1 < m; ++k) {
      tv += std::abs(v[k + 1] - v[k]);
    }
    variation[s] = tv;
  }

  Gamma1dResult r;
  r.bound = 2.0 / alpha;
  for (int s = 0; s < m; ++s) {
    if (variation[s] > r.max_variation) {
      r.max_variation = variation[s];
      r.argmax_source = (s + 1) * h;
    }
  }
  return r;
}

}  // namespace cdg::fd
