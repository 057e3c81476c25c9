#pragma once

#include <random>

#include "core.hpp"
#include "normal_forms.hpp"

namespace chball {

using Rng = std::mt19937_64;

inline Complex random_gaussian(Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  return Complex(nd(rng), nd(rng));
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
// the R diagonal pushed into Q.
inline Matrix haar_unitary(int n, Rng& rng) {
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = random_gaussian(rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex r = R(j, j);
    Q.col(j) *= (std::abs(r) > 0.0) ? r / std::abs(r) : Complex(1.0, 0.0);
  }
  return Q;
}

inline Vector random_ball_vector(int m, Rng& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Vector v(m);
  for (int i = 0; i < m; ++i) v(i) = random_gaussian(rng);
  const double r = rmax * std::pow(ud(rng), 1.0 / (2.0 * m));
  return v * (r / v.norm());
}

inline BallPoint random_ball_point(int m, Rng& rng, double rmax = 0.95) {
  return BallPoint(random_ball_vector(m, rng, rmax));
}

inline BoundaryPoint random_boundary_point(int m, Rng& rng) {
  Vector v(m);
  for (int i = 0; i < m; ++i) v(i) = random_gaussian(rng);
  return BoundaryPoint(v / v.norm());
}

// Generic element k1 a_t k2 with Haar K factors.
inline GroupElement random_group_element(int m, Rng& rng, double tmax = 1.5) {
  std::uniform_real_distribution<double> ud(0.0, tmax);
  GroupElement k1 = make_k(haar_unitary(m, rng));
  GroupElement k2 = make_k(haar_unitary(m, rng));
  return k1 * make_a(m, ud(rng)) * k2;
}

// Loxodromic h (k a_t) h^{-1} with k in M and a generic conjugator h.
inline GroupElement random_loxodromic(int m, Rng& rng, double tmin = 0.3,
                                      double tmax = 1.5, double hmax = 0.8) {
  std::uniform_real_distribution<double> ud(tmin, tmax);
  const double t = ud(rng);
  GroupElement core = make_a(m, t);
  if (m >= 2) core = make_m(haar_unitary(m - 1, rng)) * core;
  GroupElement h = random_group_element(m, rng, hmax);
  return h * core * h.inverse();
}

}  // namespace chball
