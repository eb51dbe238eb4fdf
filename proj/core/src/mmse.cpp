#include "rrie/mmse.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "rrie/csv.hpp"
#include "rrie/error.hpp"

namespace rrie {

using std::numbers::pi;

double empirical_mse(const Matrix& s, const Matrix& s_hat) {
  if (s.rows() != s_hat.rows() || s.cols() != s_hat.cols())
    throw InvalidArgument("empirical_mse: shape mismatch");
  if (s.rows() == 0) throw InvalidArgument("empirical_mse: empty matrix");
  return (s - s_hat).squaredNorm() / static_cast<double>(s.rows());
}

double normalized_mse(double mse, double signal_second_moment) {
  if (!(signal_second_moment > 0.0)) throw InvalidArgument("signal second moment must be > 0");
  return mse / signal_second_moment;
}

double mmse_general(double second_moment_s, const Vector& xi_star) {
  if (xi_star.size() == 0) return second_moment_s;
  return second_moment_s - xi_star.squaredNorm() / static_cast<double>(xi_star.size());
}

bool MmseReport::within_bounds() const {
  return theory_mmse >= -1e-6 && theory_mmse <= second_moment_s * (1.0 + 1e-6) + 1e-6;
}

MmseReport mmse_gaussian(const DensityEstimate& half, double lambda, double alpha) {
  if (!(lambda > 0.0)) throw InvalidArgument("mmse_gaussian: lambda must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  if (half.support != Support::NonNegative)
    throw InvalidArgument("mmse_gaussian expects the density on the nonnegative half-line");
  const Vector& x = half.grid;
  const Vector& mu = half.mu;
  if (x.size() < 2) throw InvalidArgument("mmse_gaussian: grid too small");

  MmseReport r;
  r.lambda = lambda;
  r.alpha = alpha;
  r.int_mu_cubed = trapezoid(x, mu.array().cube().matrix());
  const double m2_y = trapezoid(x, x.cwiseAbs2().cwiseProduct(mu));
  r.second_moment_s = (m2_y - 1.0 / alpha) / lambda;

  double inverse_term = 0.0;
  if (alpha < 1.0) {
    const double floor = kEdgeFloor * mu.maxCoeff();
    Index start = 0;
    while (start < x.size() && !(mu[start] > floor && x[start] > 0.0)) ++start;
    if (start + 1 >= x.size()) throw NumericalFailure("density has no mass away from the origin");
    r.x_min = x[start];
    const double dx = x[1] - x[0];
    r.inverse_moment_divergent = r.x_min <= 2.0 * dx;
    const Vector xs = x.tail(x.size() - start);
    const Vector f = mu.tail(x.size() - start).cwiseQuotient(xs.cwiseAbs2());
    r.int_mu_over_x2 = trapezoid(xs, f);
    const double c = 1.0 / alpha - 1.0;
    inverse_term = c * c * r.int_mu_over_x2;
  }
  r.theory_mmse = (1.0 / alpha - inverse_term - pi * pi / 3.0 * r.int_mu_cubed) / lambda;
  return r;
}

MmseReport mmse_gaussian(const SingularSpectrum& y, double lambda, Index grid_points,
                         std::optional<double> eta) {
  if (!(lambda > 0.0)) throw InvalidArgument("mmse_gaussian: lambda must be > 0");
  const double alpha = y.alpha();
  const auto half = estimate_density(y, Support::NonNegative, grid_points, eta);
  MmseReport r;
  r.lambda = lambda;
  r.alpha = alpha;
  r.int_mu_cubed = trapezoid(half.grid, half.mu.array().cube().matrix());
  const double n = static_cast<double>(y.values.size());
  r.second_moment_s = (y.values.squaredNorm() / n - 1.0 / alpha) / lambda;
  double inverse_term = 0.0;
  if (alpha < 1.0) {
    r.x_min = y.values.minCoeff();
    if (!(r.x_min > 0.0)) throw NumericalFailure("zero singular value; int mu/x^2 diverges");
    r.int_mu_over_x2 = y.values.cwiseAbs2().cwiseInverse().sum() / n;
    r.inverse_moment_divergent = r.x_min <= half.grid[1] - half.grid[0];
    const double c = 1.0 / alpha - 1.0;
    inverse_term = c * c * r.int_mu_over_x2;
  }
  r.theory_mmse = (1.0 / alpha - inverse_term - pi * pi / 3.0 * r.int_mu_cubed) / lambda;
  return r;
}

HilbertIdentityResiduals hilbert_identity_suite(const DensityEstimate& f) {
  const Vector& x = f.grid;
  const Index n = x.size();
  if (n < 3) throw InvalidArgument("identity suite needs at least 3 grid points");
  const double scale = x.cwiseAbs().maxCoeff();
  for (Index i = 0; i < n; ++i)
    if (std::abs(x[i] + x[n - 1 - i]) > 1e-12 * scale)
      throw InvalidArgument("identity suite needs a mirrored grid");

  const Vector& mu = f.mu;
  const Vector& h = f.hilbert;
  Vector h_over_x(n);
  Vector f_over_x(n);
  Index origin = -1;
  for (Index i = 0; i < n; ++i) {
    if (x[i] == 0.0) {
      origin = i;
      f_over_x[i] = 0.0;  // principal value of an odd integrand
      h_over_x[i] = 0.0;
      continue;
    }
    h_over_x[i] = h[i] / x[i];
    f_over_x[i] = mu[i] / x[i];
  }
  if (origin > 0 && origin + 1 < n)
    h_over_x[origin] = 0.5 * (h_over_x[origin - 1] + h_over_x[origin + 1]);

  const double mass = trapezoid(x, mu);
  const double pv_inverse = trapezoid(x, f_over_x);

  HilbertIdentityResiduals r;
  r.cubic = trapezoid(x, mu.cwiseProduct(h.cwiseAbs2())) - trapezoid(x, mu.array().cube().matrix()) / 3.0;
  r.moment = trapezoid(x, x.cwiseProduct(mu).cwiseProduct(h)) - mass * mass / (2.0 * pi);
  r.inverse = trapezoid(x, h_over_x.cwiseProduct(mu)) + pv_inverse * pv_inverse / (2.0 * pi);

  double f0 = 0.0;
  if (origin >= 0) {
    f0 = mu[origin];
  } else {
    for (Index i = 0; i + 1 < n; ++i)
      if (x[i] < 0.0 && x[i + 1] > 0.0)
        f0 = mu[i] + (mu[i + 1] - mu[i]) * (0.0 - x[i]) / (x[i + 1] - x[i]);
  }
  r.origin_term = 0.5 * pi * f0 * f0;
  return r;
}

std::vector<MiSample> mutual_information_curve(std::span<const MmseSample> samples, double alpha) {
  if (samples.empty()) throw InvalidArgument("mutual_information_curve: no samples");
  if (samples.front().lambda != 0.0) throw InvalidArgument("lambda grid must start at 0");
  std::vector<MiSample> out;
  out.reserve(samples.size());
  out.push_back({0.0, 0.0});
  double acc = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double dl = samples[k].lambda - samples[k - 1].lambda;
    if (!(dl > 0.0)) throw InvalidArgument("lambda grid must be strictly increasing");
    acc += 0.5 * dl * (samples[k].mmse + samples[k - 1].mmse);
    out.push_back({samples[k].lambda, 0.5 * alpha * acc});
  }
  return out;
}

void write_mmse_csv(std::ostream& out, std::span<const MmseReport> rows) {
  out << "lambda,alpha,theory_mmse,empirical_mse,stderr,int_mu_over_x2,int_mu_cubed\n";
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("nan"); };
  for (const auto& r : rows)
    out << format_double(r.lambda) << ',' << format_double(r.alpha) << ','
        << format_double(r.theory_mmse) << ',' << opt(r.empirical_mse) << ',' << opt(r.std_error)
        << ',' << format_double(r.int_mu_over_x2) << ',' << format_double(r.int_mu_cubed) << '\n';
}

}  // namespace rrie
