#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace jacksim {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecI = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using MatI = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace jacksim
