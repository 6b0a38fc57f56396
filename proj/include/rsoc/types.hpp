#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rsoc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecList = std::vector<Vec>;
using MatList = std::vector<Mat>;

}  // namespace rsoc
