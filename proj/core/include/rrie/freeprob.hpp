#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "rrie/types.hpp"

namespace rrie {

struct DensityEstimate;

/// Rectangular R-transform C^(alpha) evaluated at complex arguments.
using RTransform = std::function<Complex(Complex)>;

/// A probability measure on [0, K], in one of three representations.
///
/// Atom sets are first-class: empirical singular values enter here without
/// smoothing so that the moment generating function is exact. Grid densities
/// (nonnegative half-line) are integrated by the trapezoid rule. Analytic
/// measures supply M(z) directly.
class Measure {
 public:
  enum class Form { Atoms, Grid, Analytic };

  /// Uniform weights when `weights` is empty; otherwise weights must be
  /// nonnegative and sum to 1 (within 1e-10).
  static Measure atoms(Vector values, Vector weights = {});
  /// `density` must live on a nonnegative grid.
  static Measure grid(const DensityEstimate& density);
  static Measure grid(Vector abscissae, Vector density);
  /// `m_transform` on [0, K^-2); `support_bound` is K.
  static Measure analytic(std::function<double(double)> m_transform, double support_bound);

  Form form() const noexcept { return form_; }
  double support_bound() const noexcept { return support_bound_; }

  /// Measure of c * X for X ~ this measure (atoms and grid only).
  Measure scaled(double c) const;

  /// M(z) = int mu(t) / (1 - t^2 z) dt - 1 for real z in [0, K^-2).
  double m_transform(double z) const;
  double m_derivative(double z) const;

  /// Pole of M: K^-2, or +inf when K = 0.
  double z_edge() const noexcept;

  std::span<const double> values() const noexcept { return {x_.data(), static_cast<std::size_t>(x_.size())}; }
  std::span<const double> weights() const noexcept { return {w_.data(), static_cast<std::size_t>(w_.size())}; }

 private:
  Form form_ = Form::Atoms;
  Vector x_;
  Vector w_;
  std::function<double(double)> analytic_;
  double support_bound_ = 0.0;

  void check_domain(double z) const;
};

/// T^(alpha)(z) = (alpha z + 1)(z + 1).
double t_alpha(double z, double alpha);
Complex t_alpha(Complex z, double alpha);

/// Root of alpha y^2 + (1 + alpha) y + 1 - x = 0 on the branch with
/// T^-1(1) = 0.
double t_alpha_inverse(double x, double alpha);
Complex t_alpha_inverse(Complex x, double alpha);

/// The pair (measure, alpha) on which the rectangular transforms act.
class TransformContext {
 public:
  TransformContext(Measure measure, double alpha);

  const Measure& measure() const noexcept { return measure_; }
  double alpha() const noexcept { return alpha_; }

  double m_transform(double z) const { return measure_.m_transform(z); }
  /// H(z) = z T(M(z)).
  double h_transform(double z) const;
  double h_derivative(double z) const;

  /// Solves H(z) = w on [0, z_edge (1 - margin)) by Newton steps with
  /// bisection fallback. Throws OutOfRange if w is not attained there.
  double invert_h(double w) const;

  /// C(z) = T^-1(z / H^-1(z)); C(0) = 0.
  double rect_r_transform(double z) const;

  /// Safety margin keeping the root finder off the pole of M.
  double edge_margin = 1e-9;

 private:
  Measure measure_;
  double alpha_;
};

/// Closed-form rectangular R-transforms with complex arguments.
namespace closed_form {

/// Marchenko-Pastur (i.i.d. Gaussian entries of variance 1/N): z / alpha.
Complex marchenko_pastur(Complex z, double alpha);

/// Singular values uniform on [0, 2], alpha = 1: 2 sqrt(z) coth(2 sqrt(z)) - 1.
/// s coth s is even in s, so the result does not depend on the square root
/// branch; small |z| uses the Taylor series.
Complex uniform02(Complex z);

}  // namespace closed_form

struct RTransformCatalog {
  std::function<RTransform(double alpha)> marchenko_pastur;
  RTransform uniform02;
};

RTransformCatalog closed_form_rtransforms();

struct ConvolutionResidual {
  double z = 0.0;
  double c_y = 0.0;
  double c_s = 0.0;
  double c_z = 0.0;
  double residual = 0.0;  // c_y - c_s - c_z
};

/// Additivity check C_Y = C_S + C_Z of free rectangular convolution.
/// All contexts must share alpha.
std::vector<ConvolutionResidual> check_free_convolution(const TransformContext& signal,
                                                        const TransformContext& noise,
                                                        const TransformContext& observed,
                                                        std::span<const double> z_points);

/// CSV with header `z,c_y,c_s,c_z,residual`.
void write_residual_csv(std::ostream& out, std::span<const ConvolutionResidual> rows);

}  // namespace rrie
