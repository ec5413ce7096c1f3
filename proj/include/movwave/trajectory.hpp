#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "movwave/linalg.hpp"

namespace movwave {

// Dirichlet sine basis w_k(y) = sqrt(2/L) sin(k pi (y - lo) / L), k = 1..m.
class SpectralBasis {
 public:
  SpectralBasis(double lo, double length, int modes);
  double lo() const { return lo_; }
  double length() const { return length_; }
  int modes() const { return modes_; }
  double value(int k, double y) const;
  double derivative(int k, double y) const;
  double eigenvalue(int k) const;

 private:
  double lo_, length_;
  int modes_;
};

// Discrete-in-time solution. Modal trajectories store sine coefficients;
// grid trajectories store nodal values on n+1 uniform nodes spanning the
// per-time extent (constant in the reference frame).
struct Trajectory {
  enum class Representation { Modal, Grid };
  enum class Frame { Reference, Physical };

  Representation representation = Representation::Grid;
  Frame frame = Frame::Reference;
  std::vector<double> times;
  std::vector<VecX> values;
  std::vector<VecX> velocities;
  double lo = 0.0;
  double length = 1.0;
  std::vector<std::pair<double, double>> extents;  // grid, physical frame

  struct Sample {
    double v = 0.0;
    double v_y = 0.0;
    double v_t = 0.0;
    bool outside = false;
  };

  std::size_t size() const { return times.size(); }
  std::pair<double, double> extent(std::size_t k) const;
  Sample sample(std::size_t k, double y) const;
  // Linear interpolation between bracketing stored times.
  Sample sample_at(double t, double y) const;
  // Nodal positions of a grid trajectory at stored index k.
  std::vector<double> nodes(std::size_t k) const;
  SpectralBasis basis() const;
};

// Nodal derivative: centered inside, one-sided second order at the ends.
VecX nodal_gradient(const VecX& v, double h);

}  // namespace movwave
