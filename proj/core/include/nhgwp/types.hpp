#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nhgwp {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex I{0.0, 1.0};

}  // namespace nhgwp
