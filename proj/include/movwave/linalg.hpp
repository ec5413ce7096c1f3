#pragma once

#include <Eigen/Dense>

namespace movwave {

inline constexpr int kMaxDim = 3;

// Small spatial vectors and matrices live on the stack.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using SpaceTimeVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim + 1, 1>;

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline Vec vec1(double x) {
  Vec v(1);
  v(0) = x;
  return v;
}

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

}  // namespace movwave
