#pragma once

#include <Eigen/Dense>

namespace argosc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

} // namespace argosc
