#pragma once

#include <string_view>
#include <vector>

#include "cdgreen/geometry.hpp"

namespace cdg::fd {

enum class MeshKind { uniform, shishkin };

std::string_view to_string(MeshKind k);
MeshKind mesh_kind_from_string(std::string_view name);

// Tensor-product mesh of the unit square with N cells per direction.
//
// Shishkin: N/2 cells on [0, sx] and N/2 on [sx, 1] in x, with
// sx = min(1/2, (2/alpha) eps ln N) resolving the exponential layer at x = 0;
// N/4, N/2, N/4 cells in y with transitions sy and 1 - sy,
// sy = min(1/4, 2 sqrt(eps) ln N), for the parabolic layers at y = 0, 1.
struct TensorMesh {
  std::vector<double> x;
  std::vector<double> y;
  MeshKind kind = MeshKind::uniform;
  double sigma_x = 0.5;
  double sigma_y = 0.25;

  static TensorMesh uniform(int n);
  static TensorMesh shishkin(int n, double eps, double alpha);
  static TensorMesh make(MeshKind kind, int n, double eps, double alpha);

  int nx() const { return static_cast<int>(x.size()) - 1; }
  int ny() const { return static_cast<int>(y.size()) - 1; }

  // index of the knot closest to v
  static int nearest(const std::vector<double>& knots, double v);
  // cell (i, j) with x[i] <= p.x <= x[i+1], clamped to the mesh
  void locate(Point p, int& i, int& j) const;
};

}  // namespace cdg::fd
