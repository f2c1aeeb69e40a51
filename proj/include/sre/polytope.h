#ifndef SRE_POLYTOPE_H
#define SRE_POLYTOPE_H

#include <Eigen/Dense>
#include <random>

namespace sre {

// { x : A x <= b }.
struct Polytope {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  Eigen::Index dim() const { return A.cols(); }
  Eigen::Index num_constraints() const { return A.rows(); }

  bool Contains(const Eigen::VectorXd& x, double tol = 1e-7) const;

  // Euclidean projection, solved as an LCP on the dual multipliers.
  Eigen::VectorXd Project(const Eigen::VectorXd& y) const;

  // Coordinate-wise bounds from 2n LPs. Throws if the polytope is empty or
  // unbounded.
  void BoundingBox(Eigen::VectorXd* lo, Eigen::VectorXd* hi) const;

  // Minimizes c^T x over the polytope.
  Eigen::VectorXd MinimizeLinear(const Eigen::VectorXd& c) const;

  // Projection of a uniform point of the bounding box.
  Eigen::VectorXd RandomPoint(std::mt19937_64& rng) const;
};

}  // namespace sre

#endif  // SRE_POLYTOPE_H
