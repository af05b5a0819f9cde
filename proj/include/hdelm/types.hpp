#pragma once

#include <Eigen/Dense>

namespace hdelm {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A block of points, one point per row. Row-major so that a single point is
/// a contiguous span of dim_total coordinates.
using PointBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace hdelm
