#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rrie {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

}  // namespace rrie
