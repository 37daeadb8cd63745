#include "cdgreen/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cdg::fd {
namespace {

void append_uniform(std::vector<double>& knots, double a, double b, int cells) {
  for (int k = 1; k <= cells; ++k) knots.push_back(k == cells ? b : a + (b - a) * k / cells);
}

}  // namespace

std::string_view to_string(MeshKind k) {
  return k == MeshKind::uniform ? "uniform" : "shishkin";
}

MeshKind mesh_kind_from_string(std::string_view name) {
  if (name == "uniform") return MeshKind::uniform;
  if (name == "shishkin") return MeshKind::shishkin;
  throw std::invalid_argument("unknown mesh kind '" + std::string(name) + "'");
}

TensorMesh TensorMesh::uniform(int n) {
  if (n < 2) throw std::invalid_argument("mesh: need at least 2 cells per direction");
  TensorMesh m;
  m.x = {0.0};
  append_uniform(m.x, 0.0, 1.0, n);
  m.y = m.x;
  return m;
}

TensorMesh TensorMesh::shishkin(int n, double eps, double alpha) {
  if (n < 4 || n % 4 != 0) throw std::invalid_argument("Shishkin mesh: N must be a multiple of 4");
  if (!(eps > 0.0 && eps <= 1.0) || !(alpha > 0.0)) {
    throw std::domain_error("Shishkin mesh: need eps in (0,1] and alpha > 0");
  }
  TensorMesh m;
  m.kind = MeshKind::shishkin;
  const double ln_n = std::log(static_cast<double>(n));
  m.sigma_x = std::min(0.5, 2.0 / alpha * eps * ln_n);
  m.sigma_y = std::min(0.25, 2.0 * std::sqrt(eps) * ln_n);
  m.x = {0.0};
  append_uniform(m.x, 0.0, m.sigma_x, n / 2);
  append_uniform(m.x, m.sigma_x, 1.0, n / 2);
  m.y = {0.0};
  append_uniform(m.y, 0.0, m.sigma_y, n / 4);
  append_uniform(m.y, m.sigma_y, 1.0 - m.sigma_y, n / 2);
  append_uniform(m.y, 1.0 - m.sigma_y, 1.0, n / 4);
  return m;
}

TensorMesh TensorMesh::make(MeshKind kind, int n, double eps, double alpha) {
  return kind == MeshKind::uniform ? uniform(n) : shishkin(n, eps, alpha);
}

int TensorMesh::nearest(const std::vector<double>& knots, double v) {
  const auto it = std::lower_bound(knots.begin(), knots.end(), v);
  if (it == knots.begin()) return 0;
  if (it == knots.end()) return static_cast<int>(knots.size()) - 1;
  const int hi = static_cast<int>(it - knots.begin());
  return (v - knots[hi - 1] <= knots[hi] - v) ? hi - 1 : hi;
}

void TensorMesh::locate(Point p, int& i, int& j) const {
  auto cell = [](const std::vector<double>& k, double v) {
    const auto it = std::upper_bound(k.begin(), k.end(), v);
    const int idx = static_cast<int>(it - k.begin()) - 1;
    return std::clamp(idx, 0, static_cast<int>(k.size()) - 2);
  };
  i = cell(x, p.x);
  j = cell(y, p.y);
}

}  // namespace cdg::fd
