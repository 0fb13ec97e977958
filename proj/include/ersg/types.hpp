#pragma once

#include <Eigen/Dense>

namespace ersg {

template <class Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using RowMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Scalar>
using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixT<double>;
using RowMatrix = RowMatrixT<double>;
using Vector = VectorT<double>;
using IntVector = VectorT<int>;

// tolerance used when checking that probability vectors/rows are valid
inline constexpr double kProbTol = 1e-9;

}  // namespace ersg
