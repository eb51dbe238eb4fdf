#include "rrie/freeprob.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "rrie/csv.hpp"
#include "rrie/error.hpp"
#include "rrie/spectral.hpp"

namespace rrie {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Trapezoid weights for a (possibly non-uniform) increasing grid.
Vector trapezoid_weights(const Vector& x) {
  Vector w = Vector::Zero(x.size());
  for (Index i = 0; i + 1 < x.size(); ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------- Measure

Measure Measure::atoms(Vector values, Vector weights) {
  if (values.size() == 0) throw InvalidArgument("atom measure needs at least one atom");
  if (weights.size() == 0) weights = Vector::Constant(values.size(), 1.0 / values.size());
  if (weights.size() != values.size()) throw InvalidArgument("atom weights/values size mismatch");
  if ((values.array() < 0.0).any() || !values.allFinite())
    throw InvalidArgument("atoms must be finite and nonnegative");
  if ((weights.array() < 0.0).any()) throw InvalidArgument("atom weights must be nonnegative");
  if (std::abs(weights.sum() - 1.0) > 1e-10) throw InvalidArgument("atom weights must sum to 1");
  Measure m;
  m.form_ = Form::Atoms;
  m.support_bound_ = values.maxCoeff();
  m.x_ = std::move(values);
  m.w_ = std::move(weights);
  return m;
}

Measure Measure::grid(Vector abscissae, Vector density) {
  if (abscissae.size() < 2 || abscissae.size() != density.size())
    throw InvalidArgument("grid measure needs matching abscissae/density of length >= 2");
  if (abscissae[0] < 0.0) throw InvalidArgument("grid measure must live on [0, K]");
  for (Index i = 1; i < abscissae.size(); ++i)
    if (!(abscissae[i] > abscissae[i - 1])) throw InvalidArgument("grid must be strictly increasing");
  if ((density.array() < 0.0).any()) throw InvalidArgument("density must be nonnegative");
  Vector w = trapezoid_weights(abscissae).cwiseProduct(density);
  const double mass = w.sum();
  if (!(mass > 0.0)) throw InvalidArgument("grid density has zero mass");
  Measure m;
  m.form_ = Form::Grid;
  m.x_ = std::move(abscissae);
  m.w_ = w / mass;
  // Effective support: last grid point carrying mass.
  m.support_bound_ = 0.0;
  for (Index i = 0; i < m.x_.size(); ++i)
    if (m.w_[i] > 0.0) m.support_bound_ = m.x_[i];
  return m;
}

Measure Measure::grid(const DensityEstimate& density) { return grid(density.grid, density.mu); }

Measure Measure::analytic(std::function<double(double)> m_transform, double support_bound) {
  if (!m_transform) throw InvalidArgument("analytic measure needs an M-transform");
  if (!(support_bound >= 0.0) || !std::isfinite(support_bound))
    throw InvalidArgument("support bound must be finite and nonnegative");
  Measure m;
  m.form_ = Form::Analytic;
  m.analytic_ = std::move(m_transform);
  m.support_bound_ = support_bound;
  return m;
}

Measure Measure::scaled(double c) const {
  if (form_ == Form::Analytic) throw InvalidArgument("cannot rescale an analytic measure");
  if (!(c >= 0.0)) throw InvalidArgument("scale must be nonnegative");
  Measure m = *this;
  m.x_ *= c;
  m.support_bound_ *= c;
  return m;
}

double Measure::z_edge() const noexcept {
  return support_bound_ > 0.0 ? 1.0 / (support_bound_ * support_bound_)
                              : std::numeric_limits<double>::infinity();
}

void Measure::check_domain(double z) const {
  if (!(z >= 0.0) || !(z < z_edge()))
    throw OutOfRange("M-transform argument outside [0, K^-2): " + format_double(z));
}

double Measure::m_transform(double z) const {
  check_domain(z);
  if (form_ == Form::Analytic) return analytic_(z);
  // sum w t^2 z / (1 - t^2 z) avoids cancelling the leading 1.
  double acc = 0.0;
  for (Index i = 0; i < x_.size(); ++i) {
    const double t2z = x_[i] * x_[i] * z;
    acc += w_[i] * t2z / (1.0 - t2z);
  }
  return acc;
}

double Measure::m_derivative(double z) const {
  check_domain(z);
  if (form_ == Form::Analytic) {
    const double h = 1e-7 * (1.0 + z);
    double hi = z + h;
    if (hi >= z_edge()) hi = z + 0.5 * (z_edge() - z);
    const double lo = std::max(0.0, z - h);
    return (analytic_(hi) - analytic_(lo)) / (hi - lo);
  }
  double acc = 0.0;
  for (Index i = 0; i < x_.size(); ++i) {
    const double t2 = x_[i] * x_[i];
    const double d = 1.0 - t2 * z;
    acc += w_[i] * t2 / (d * d);
  }
  return acc;
}

// ------------------------------------------------------------- T-transform

double t_alpha(double z, double alpha) { return (alpha * z + 1.0) * (z + 1.0); }

Complex t_alpha(Complex z, double alpha) { return (alpha * z + 1.0) * (z + 1.0); }

// Rationalised root 2(x - 1) / ((1 + a) + sqrt((1 + a)^2 + 4a(x - 1))), which
// equals the textbook root [-(1 + a) + sqrt(...)] / (2a) without cancellation.
double t_alpha_inverse(double x, double alpha) {
  const double b = 1.0 + alpha;
  const double disc = b * b + 4.0 * alpha * (x - 1.0);
  if (disc < 0.0) throw OutOfRange("T^-1 argument below the branch point");
  return 2.0 * (x - 1.0) / (b + std::sqrt(disc));
}

Complex t_alpha_inverse(Complex x, double alpha) {
  const double b = 1.0 + alpha;
  return 2.0 * (x - 1.0) / (b + std::sqrt(b * b + 4.0 * alpha * (x - 1.0)));
}

// ------------------------------------------------------- TransformContext

TransformContext::TransformContext(Measure measure, double alpha)
    : measure_(std::move(measure)), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
}

double TransformContext::h_transform(double z) const {
  return z * t_alpha(measure_.m_transform(z), alpha_);
}

double TransformContext::h_derivative(double z) const {
  const double m = measure_.m_transform(z);
  const double dt = 2.0 * alpha_ * m + 1.0 + alpha_;
  return t_alpha(m, alpha_) + z * dt * measure_.m_derivative(z);
}

double TransformContext::invert_h(double w) const {
  if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("invert_h needs finite w >= 0");
  if (w == 0.0) return 0.0;
  const double tol = 1e-12 * std::max(1.0, w);

  double lo = 0.0;
  double hi = 0.0;
  const double edge = measure_.z_edge();
  if (std::isfinite(edge)) {
    hi = edge * (1.0 - edge_margin);
    if (h_transform(hi) < w)
      throw OutOfRange("w = " + format_double(w) + " beyond the attainable range of H");
  } else {
    hi = std::max(1.0, w);
    for (int k = 0; h_transform(hi) < w; ++k) {
      if (k > 200) throw OutOfRange("could not bracket H^-1(w)");
      hi *= 2.0;
    }
  }

  double z = std::min(w, 0.5 * (lo + hi));
  constexpr int kNewtonSteps = 100;
  constexpr int kMaxSteps = kNewtonSteps + 400;
  for (int it = 0; it < kMaxSteps; ++it) {
    const double f = h_transform(z) - w;
    if (std::abs(f) < tol) return z;
    (f < 0.0 ? lo : hi) = z;
    if (hi - lo <= 4.0 * kEps * hi) return z;
    double next = 0.5 * (lo + hi);
    if (it < kNewtonSteps) {
      const double step = z - f / h_derivative(z);
      if (std::isfinite(step) && step > lo && step < hi) next = step;
    }
    z = next;
  }
  throw NumericalFailure("H^-1 did not converge");
}

double TransformContext::rect_r_transform(double z) const {
  if (z == 0.0) return 0.0;
  const double inv = invert_h(z);
  return t_alpha_inverse(z / inv, alpha_);
}

// ------------------------------------------------------------ closed forms

namespace closed_form {

Complex marchenko_pastur(Complex z, double alpha) { return z / alpha; }

Complex uniform02(Complex z) {
  // u = s^2 with s = 2 sqrt(z); s coth s = sum_n 2^{2n} B_{2n} u^n / (2n)!
  const Complex u = 4.0 * z;
  if (std::abs(u) < 1e-2) {
    static constexpr double kCoef[] = {1.0 / 3.0,  -1.0 / 45.0,     2.0 / 945.0,
                                       -1.0 / 4725.0, 2.0 / 93555.0, -1382.0 / 638512875.0};
    Complex acc = 0.0;
    for (int k = 5; k >= 0; --k) acc = (acc + kCoef[k]) * u;
    return acc;
  }
  const Complex s = 2.0 * std::sqrt(z);  // principal: Re s >= 0, so exp(-2s) stays bounded
  const Complex e = std::exp(-2.0 * s);
  return s * (1.0 + e) / (1.0 - e) - 1.0;
}

}  // namespace closed_form

RTransformCatalog closed_form_rtransforms() {
  RTransformCatalog cat;
  cat.marchenko_pastur = [](double alpha) -> RTransform {
    return [alpha](Complex z) { return closed_form::marchenko_pastur(z, alpha); };
  };
  cat.uniform02 = [](Complex z) { return closed_form::uniform02(z); };
  return cat;
}

std::vector<ConvolutionResidual> check_free_convolution(const TransformContext& signal,
                                                        const TransformContext& noise,
                                                        const TransformContext& observed,
                                                        std::span<const double> z_points) {
  if (signal.alpha() != noise.alpha() || signal.alpha() != observed.alpha())
    throw InvalidArgument("free convolution check needs a common alpha");
  std::vector<ConvolutionResidual> out;
  out.reserve(z_points.size());
  for (double z : z_points) {
    ConvolutionResidual r;
    r.z = z;
    r.c_y = observed.rect_r_transform(z);
    r.c_s = signal.rect_r_transform(z);
    r.c_z = noise.rect_r_transform(z);
    r.residual = r.c_y - r.c_s - r.c_z;
    out.push_back(r);
  }
  return out;
}

void write_residual_csv(std::ostream& out, std::span<const ConvolutionResidual> rows) {
  out << "z,c_y,c_s,c_z,residual\n";
  for (const auto& r : rows)
    out << format_double(r.z) << ',' << format_double(r.c_y) << ',' << format_double(r.c_s) << ','
        << format_double(r.c_z) << ',' << format_double(r.residual) << '\n';
}

}  // namespace rrie
