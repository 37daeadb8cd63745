#pragma once

#include <array>
#include <memory>
#include <string_view>

#include "cdgreen/coefficients.hpp"
#include "cdgreen/fundamental.hpp"
#include "cdgreen/geometry.hpp"

namespace cdg {

// Method-of-images approximations of the Green's function.
//
//   bar_*   : q = a(x,y)/2, frozen at the singular point
//   tilde_* : q = a(xi,eta)/2, frozen at the field point
//   *_strip : domain (0,1) x R, images in xi (bar) or x (tilde) only
//   *_square: domain (0,1)^2, additional cut-off images in eta (bar) or y
//             (tilde); the Neumann variants flip the sign of those images
enum class ImageVariant {
  bar_strip,
  tilde_strip,
  bar_square,
  tilde_square,
  bar_square_neumann,
  tilde_square_neumann,
};

std::string_view to_string(ImageVariant v);
ImageVariant image_variant_from_string(std::string_view name);

bool is_bar(ImageVariant v);
bool is_square(ImageVariant v);
bool is_neumann(ImageVariant v);

struct ImageGreenSpec {
  ImageVariant variant = ImageVariant::bar_square;
  std::shared_ptr<const CoefficientField> field;
  double eps = 1.0;

  ImageGreenSpec(ImageVariant v, std::shared_ptr<const CoefficientField> f, double e);
  ImageGreenSpec(ImageVariant v, const CoefficientField& f, double e);
};

// All derivative kinds at one field point, indexed by DerivKind.
//
// d_xi, d_eta and the second derivatives are partials at frozen q; for bar
// variants they are the total derivatives. d_x and d_y are partials in the
// singular point at frozen q (totals for tilde variants). full_D_y adds the
// a_y(x,y)/2 * d_q chain term for bar variants and full_D_eta the
// a_eta(xi,eta)/2 * d_q term for tilde variants, so both are total
// derivatives of the approximation.
struct KindValues {
  std::array<double, kAllDerivKinds.size()> values{};
  double operator[](DerivKind k) const { return values[static_cast<std::size_t>(k)]; }
  double& operator[](DerivKind k) { return values[static_cast<std::size_t>(k)]; }
};

KindValues eval_image_all(const ImageGreenSpec& spec, Point singular, Point field);
double eval_image(const ImageGreenSpec& spec, Point singular, Point field, DerivKind kind);

// The frozen adjoint operator -eps(d_xi^2 + d_eta^2) + a d_xi applied to a
// bar-variant approximation away from the source: the defect function.
// `scale` is the largest of the three operator terms, for relative checks.
struct FrozenResidual {
  double value = 0.0;
  double scale = 0.0;
};

// Throws std::domain_error for tilde variants or a coefficient field that is
// not constant with b = 0.
FrozenResidual frozen_residual(const ImageGreenSpec& spec, Point singular, Point field);

}  // namespace cdg
