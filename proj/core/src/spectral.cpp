#include "rrie/spectral.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "rrie/csv.hpp"
#include "rrie/error.hpp"

namespace rrie {

using std::numbers::pi;

SingularSpectrum svd_spectrum(const Matrix& a, bool keep_vectors) {
  const Index n = a.rows();
  const Index m = a.cols();
  if (n < 1 || m < 1) throw InvalidArgument("svd_spectrum: empty matrix");
  if (n > m) throw InvalidArgument("svd_spectrum: rows > cols; transpose the input first");
  if (!a.allFinite()) throw NumericalFailure("svd_spectrum: non-finite entries");

  SingularSpectrum out;
  out.n = n;
  out.m = m;
  const unsigned opts = keep_vectors ? Eigen::ComputeThinU | Eigen::ComputeThinV : 0u;
  Eigen::BDCSVD<Matrix> svd(a, opts);
  if (svd.info() != Eigen::Success) throw NumericalFailure("SVD did not converge");
  out.values = svd.singularValues();
  if (keep_vectors) {
    out.left = svd.matrixU();
    out.right = svd.matrixV();
  }
  return out;
}

SingularSpectrum spectrum_from_values(Vector values, Index n, Index m) {
  if (values.size() != n) throw InvalidArgument("spectrum length must equal n");
  if (n > m) throw InvalidArgument("spectrum needs n <= m");
  if ((values.array() < 0.0).any() || !values.allFinite())
    throw InvalidArgument("singular values must be finite and nonnegative");
  std::sort(values.begin(), values.end(), std::greater<>());
  SingularSpectrum s;
  s.values = std::move(values);
  s.n = n;
  s.m = m;
  return s;
}

Vector symmetrize(const SingularSpectrum& spectrum) {
  const Index n = spectrum.values.size();
  Vector out(2 * n);
  for (Index i = 0; i < n; ++i) {
    out[i] = -spectrum.values[i];
    out[n + i] = spectrum.values[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

double default_eta(const SingularSpectrum& spectrum) {
  const double w = std::max(spectrum.max_value() / 4.0, 1e-3);
  return w / std::sqrt(static_cast<double>(std::max<Index>(spectrum.values.size(), 1)));
}

namespace {

// Sum over the symmetrised atoms at x - i eta, fixed order, optionally
// skipping the +gamma atom with index `skip`.
Complex cauchy_sum(const Vector& gamma, double x, double eta, Index skip = -1) {
  const double eta2 = eta * eta;
  double re = 0.0;
  double im = 0.0;
  for (Index k = 0; k < gamma.size(); ++k) {
    const double g = gamma[k];
    const double dm = x + g;
    const double wm = 1.0 / (dm * dm + eta2);
    if (k == skip) {
      re += dm * wm;
      im += eta * wm;
      continue;
    }
    const double dp = x - g;
    const double wp = 1.0 / (dp * dp + eta2);
    // Pairwise sums keep G(-x) = -conj G(x) exact.
    re += dm * wm + dp * wp;
    im += eta * (wm + wp);
  }
  return {re, im};
}

}  // namespace

StieltjesEval stieltjes_cauchy(const SingularSpectrum& spectrum, std::span<const double> points,
                               double eta) {
  if (!(eta > 0.0)) throw InvalidArgument("stieltjes_cauchy: eta must be positive");
  if (spectrum.values.size() == 0) throw InvalidArgument("stieltjes_cauchy: empty spectrum");
  StieltjesEval out;
  out.eta = eta;
  out.points = Eigen::Map<const Vector>(points.data(), static_cast<Index>(points.size()));
  out.g.resize(out.points.size());
  const double norm = 1.0 / (2.0 * static_cast<double>(spectrum.values.size()));
  for (Index i = 0; i < out.points.size(); ++i)
    out.g[i] = norm * cauchy_sum(spectrum.values, out.points[i], eta);
  return out;
}

Complex stieltjes_symmetrized(const Vector& gamma, Complex z) {
  if (z.imag() == 0.0) throw InvalidArgument("resolvent evaluated on the real axis");
  Complex acc = 0.0;
  for (Index k = 0; k < gamma.size(); ++k) acc += 1.0 / (z - gamma[k]) + 1.0 / (z + gamma[k]);
  return acc / (2.0 * static_cast<double>(gamma.size()));
}

double trapezoid(const Vector& x, const Vector& y) {
  double acc = 0.0;
  for (Index i = 0; i + 1 < x.size(); ++i) acc += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return acc;
}

namespace {

std::vector<bool> edge_flags(const Vector& mu) {
  const double floor = kEdgeFloor * (mu.size() ? mu.maxCoeff() : 0.0);
  std::vector<bool> edge(static_cast<std::size_t>(mu.size()));
  for (Index i = 0; i < mu.size(); ++i) edge[i] = !(mu[i] > floor);
  return edge;
}

}  // namespace

DensityEstimate density_and_hilbert(const StieltjesEval& eval, Support support, bool renormalize) {
  DensityEstimate d;
  d.grid = eval.points;
  d.eta = eval.eta;
  d.support = support;
  const double scale = support == Support::NonNegative ? 2.0 : 1.0;
  d.mu = scale * eval.g.imag() / pi;
  d.hilbert = eval.g.real() / pi;
  for (Index i = 0; i < d.mu.size(); ++i) {
    if (d.mu[i] < 0.0) {
      d.mu[i] = 0.0;
      ++d.clipped;
    }
  }
  d.raw_mass = d.grid.size() > 1 ? trapezoid(d.grid, d.mu) : 0.0;
  if (renormalize && d.grid.size() > 1) {
    if (!(d.raw_mass > 0.0)) throw NumericalFailure("density has zero mass on the grid");
    d.mu /= d.raw_mass;
    d.hilbert /= d.raw_mass;
  }
  d.edge = edge_flags(d.mu);
  return d;
}

Vector default_grid(const SingularSpectrum& spectrum, Support support, Index points) {
  if (points < 2) throw InvalidArgument("grid needs at least 2 points");
  const double half = 1.05 * std::max(spectrum.max_value(), 1e-3);
  Vector x(points);
  const double denom = static_cast<double>(points - 1);
  for (Index i = 0; i < points; ++i) {
    if (support == Support::Symmetric) {
      // Integer numerator keeps x[i] == -x[points - 1 - i] bit-exactly.
      x[i] = half * (static_cast<double>(2 * i - (points - 1)) / denom);
    } else {
      x[i] = half * (static_cast<double>(i) / denom);
    }
  }
  return x;
}

DensityEstimate estimate_density(const SingularSpectrum& spectrum, Support support, Index points,
                                 std::optional<double> eta) {
  const Vector grid = default_grid(spectrum, support, points);
  const auto eval = stieltjes_cauchy(
      spectrum, {grid.data(), static_cast<std::size_t>(grid.size())}, eta.value_or(default_eta(spectrum)));
  return density_and_hilbert(eval, support);
}

Complex PointDensity::resolvent(Index i) const { return {pi * hilbert[i], pi * mu[i]}; }

PointDensity eval_at_singular_values(const SingularSpectrum& spectrum, double eta,
                                     bool leave_one_out) {
  const Index n = spectrum.values.size();
  if (n == 0) throw InvalidArgument("eval_at_singular_values: empty spectrum");
  if (!(eta > 0.0)) throw InvalidArgument("eval_at_singular_values: eta must be positive");
  PointDensity out;
  out.eta = eta;
  out.points = spectrum.values;
  out.mu.resize(n);
  out.hilbert.resize(n);
  const double norm = leave_one_out && n > 0 ? 1.0 / (2.0 * static_cast<double>(n) - 1.0)
                                             : 1.0 / (2.0 * static_cast<double>(n));
  for (Index i = 0; i < n; ++i) {
    const Complex g = norm * cauchy_sum(spectrum.values, spectrum.values[i], eta, leave_one_out ? i : -1);
    out.mu[i] = std::max(g.imag(), 0.0) / pi;
    out.hilbert[i] = g.real() / pi;
  }
  out.edge = edge_flags(out.mu);
  return out;
}

void write_density_csv(std::ostream& out, const DensityEstimate& density) {
  out << "x,mu,hilbert,flag\n";
  for (Index i = 0; i < density.grid.size(); ++i)
    out << format_double(density.grid[i]) << ',' << format_double(density.mu[i]) << ','
        << format_double(density.hilbert[i]) << ',' << (density.edge[i] ? 1 : 0) << '\n';
}

}  // namespace rrie
