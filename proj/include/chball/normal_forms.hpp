#pragma once

#include <Eigen/SVD>
#include <cmath>

#include "core.hpp"
#include "spectral.hpp"

namespace chball {

// a_t: cosh/sinh corners, identity middle block.
inline GroupElement make_a(int m, double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::Precondition, "make_a: t not finite");
  Matrix M = Matrix::Identity(m + 1, m + 1);
  M(0, 0) = M(m, m) = std::cosh(t);
  M(0, m) = M(m, 0) = std::sinh(t);
  return GroupElement::from_matrix(m, M);
}

// K = stabilizer of 0: block diag(U, 1) with U unitary.
inline GroupElement make_k(const Matrix& U, const Config& cfg = default_config()) {
  const int m = static_cast<int>(U.rows());
  if (U.cols() != m || m < 1)
    throw Error(ErrorKind::Precondition, "make_k: U must be square");
  if ((U.adjoint() * U - Matrix::Identity(m, m)).norm() > cfg.tol_group * m)
    throw Error(ErrorKind::Precondition, "make_k: U is not unitary");
  Matrix M = Matrix::Identity(m + 1, m + 1);
  M.topLeftCorner(m, m) = U;
  return GroupElement::from_matrix(m, M, cfg);
}

// M = centralizer of A in K: diag(1, U, 1) with U in U(m-1).
inline GroupElement make_m(const Matrix& U, const Config& cfg = default_config()) {
  const int mm = static_cast<int>(U.rows());
  if (U.cols() != mm || mm < 0)
    throw Error(ErrorKind::Precondition, "make_m: U must be square");
  const int m = mm + 1;
  if ((U.adjoint() * U - Matrix::Identity(mm, mm)).norm() > cfg.tol_group * std::max(mm, 1))
    throw Error(ErrorKind::Precondition, "make_m: U is not unitary");
  Matrix M = Matrix::Identity(m + 1, m + 1);
  if (mm > 0) M.block(1, 1, mm, mm) = U;
  return GroupElement::from_matrix(m, M, cfg);
}

// Complete a unit vector to a unitary matrix with that vector as first
// column (modified Gram-Schmidt over the standard basis, largest residual
// first).
inline Matrix unitary_completion(const Vector& v) {
  const int m = static_cast<int>(v.size());
  Matrix U(m, m);
  U.col(0) = v / v.norm();
  int filled = 1;
  std::vector<bool> used(m, false);
  while (filled < m) {
    int best = -1;
    double best_norm = -1.0;
    Vector best_res;
    for (int i = 0; i < m; ++i) {
      if (used[i]) continue;
      Vector r = unit_vector(m, i);
      for (int j = 0; j < filled; ++j) r -= U.col(j).dot(r) * U.col(j);
      // second orthogonalization pass for accuracy
      for (int j = 0; j < filled; ++j) r -= U.col(j).dot(r) * U.col(j);
      const double rn = r.norm();
      if (rn > best_norm) {
        best_norm = rn;
        best = i;
        best_res = std::move(r);
      }
    }
    if (best_norm <= 1e-12)
      throw Error(ErrorKind::Numerical, "unitary_completion: basis collapsed");
    used[best] = true;
    U.col(filled++) = best_res / best_norm;
  }
  return U;
}

struct KAKFactors {
  GroupElement k1;
  double t = 0.0;
  GroupElement k2;
  double residual = 0.0;
};

// g = k1 a_t k2 following the transitivity-on-spheres construction:
// k1 rotates g(0) onto the positive first axis, t = arctanh ||g(0)||,
// k2 = a_t^{-1} k1^{-1} g.
inline KAKFactors kak(const GroupElement& g, const Config& cfg = default_config()) {
  const int m = g.m();
  const Vector g0 = act(g, Vector(Vector::Zero(m)), cfg);
  const double r = g0.norm();
  if (r >= 1.0 - 1e-15)
    throw Error(ErrorKind::Precondition,
                "kak: ||g(0)|| at the boundary; not a bounded automorphism");
  KAKFactors out;
  out.t = std::atanh(r);
  out.k1 = (r < 1e-300) ? GroupElement::identity(m)
                        : make_k(unitary_completion(g0 / r), cfg);
  out.k2 = make_a(m, -out.t) * out.k1.inverse() * g;
  // K block pattern check on the derived factor
  const double off = std::max(out.k2.block_b().norm(), out.k2.block_c().norm());
  if (off > 1e-8)
    throw Error(ErrorKind::Numerical, "kak: residual factor not in K");
  out.residual = projective_distance(out.k1 * make_a(m, out.t) * out.k2, g);
  return out;
}

// Automorphism h with h(e_1) = x_plus and h(-e_1) = x_minus, built from a
// J-orthonormal frame: the null lifts of the target pair are scaled so their
// pairing matches [e_1 + e_{m+1}, -e_1 + e_{m+1}] = -2, the J-orthogonal
// complement is completed, and h maps frame to frame.
inline GroupElement move_pair(const BoundaryPoint& x_plus,
                              const BoundaryPoint& x_minus,
                              const Config& cfg = default_config()) {
  const int m = static_cast<int>(x_plus.z.size());
  if (x_minus.z.size() != m)
    throw Error(ErrorKind::Precondition, "move_pair: dimension mismatch");
  const HermitianForm form{m};
  Vector X(m + 1), Y(m + 1);
  X.head(m) = x_plus.z;
  X(m) = 1.0;
  Y.head(m) = x_minus.z;
  Y(m) = 1.0;
  const Complex ip = form_value(X, Y, form);
  if (std::abs(ip) < 1e-12)
    throw Error(ErrorKind::Degenerate, "move_pair: coincident boundary points");
  Y *= std::conj(Complex(-2.0, 0.0) / ip);  // now [X, Y] = -2

  // J-orthogonal complement of span(X, Y): kernel of the two linear forms
  Matrix C(2, m + 1);
  const Matrix J = form_matrix(m);
  C.row(0) = (J * X.conjugate()).transpose();
  C.row(1) = (J * Y.conjugate()).transpose();
  Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullV);
  Matrix W = svd.matrixV().rightCols(m - 1);
  // Gram-Schmidt in the J-inner product (positive definite on the complement)
  for (int j = 0; j < m - 1; ++j) {
    Vector w = W.col(j);
    for (int i = 0; i < j; ++i)
      w -= form_value(w, W.col(i), form) * W.col(i);
    const double n2 = form_value(w, w, form).real();
    if (n2 <= 1e-12)
      throw Error(ErrorKind::Numerical, "move_pair: complement not positive");
    W.col(j) = w / std::sqrt(n2);
  }

  Matrix F1(m + 1, m + 1), F2(m + 1, m + 1);
  F1.col(0) = unit_vector(m + 1, 0) + unit_vector(m + 1, m);
  F1.col(1) = -unit_vector(m + 1, 0) + unit_vector(m + 1, m);
  for (int j = 2; j <= m; ++j) F1.col(j) = unit_vector(m + 1, j - 1);
  F2.col(0) = X;
  F2.col(1) = Y;
  for (int j = 2; j <= m; ++j) F2.col(j) = W.col(j - 2);

  GroupElement h = GroupElement::from_matrix(m, F2 * F1.inverse(), cfg);
  if ((act(h, Vector(unit_vector(m, 0)), cfg) - x_plus.z).norm() > 1e-8 ||
      (act(h, Vector(-unit_vector(m, 0)), cfg) - x_minus.z).norm() > 1e-8)
    throw Error(ErrorKind::Numerical, "move_pair: residual check failed");
  return h;
}

struct LoxodromicNormalForm {
  GroupElement h;
  GroupElement k;  // in M
  double t = 0.0;
  double residual = 0.0;
};

// g = h k a_t h^{-1} with k in M and t = log lambda1(g).
inline LoxodromicNormalForm loxodromic_normal_form(
    const GroupElement& g, const Config& cfg = default_config()) {
  SpectralData sd = classify(g, cfg);
  if (sd.kind != AutKind::Loxodromic)
    throw Error(ErrorKind::Precondition,
                "loxodromic_normal_form: element is not loxodromic");
  const int m = g.m();
  LoxodromicNormalForm out;
  out.t = std::log(sd.lambda1);
  out.h = move_pair(*sd.fixed_plus, *sd.fixed_minus, cfg);
  GroupElement w = out.h.inverse() * g * out.h;  // = k a_t up to phase
  GroupElement kraw = w * make_a(m, -out.t);
  Matrix kl = kraw.lift();
  const Complex corner = kl(0, 0);
  if (std::abs(corner) < 1e-8)
    throw Error(ErrorKind::Numerical, "loxodromic_normal_form: degenerate M factor");
  kl *= std::conj(corner) / std::abs(corner);
  out.k = GroupElement::from_matrix(m, kl, cfg);
  // M block shape: unit corners, vanishing first row/column elsewhere
  Matrix kk = out.k.lift() * std::sqrt(1.0 / std::norm(out.k.lift()(0, 0)));
  double shape = std::abs(kk(0, 0) - 1.0) + std::abs(kk(m, m) - 1.0);
  for (int i = 1; i < m; ++i)
    shape += std::abs(kk(0, i)) + std::abs(kk(i, 0)) + std::abs(kk(m, i)) +
             std::abs(kk(i, m));
  shape += std::abs(kk(0, m)) + std::abs(kk(m, 0));
  if (shape > 1e-7)
    throw Error(ErrorKind::Numerical,
                "loxodromic_normal_form: recovered factor not in M");
  out.residual = projective_distance(
      out.h * out.k * make_a(m, out.t) * out.h.inverse(), g);
  return out;
}

// Extend an automorphism of B^m to B^M fixing the extra coordinates: the
// partner of phi under the trivial embedding (z, 0).
inline GroupElement block_extend(const GroupElement& g, int M,
                                 const Config& cfg = default_config()) {
  const int m = g.m();
  if (M < m) throw Error(ErrorKind::Precondition, "block_extend: M >= m required");
  if (M == m) return g;
  const Matrix u = g.unitary_lift();
  Matrix E = Matrix::Identity(M + 1, M + 1);
  E.topLeftCorner(m, m) = u.topLeftCorner(m, m);
  E.block(0, M, m, 1) = u.block(0, m, m, 1);
  E.block(M, 0, 1, m) = u.block(m, 0, 1, m);
  E(M, M) = u(m, m);
  return GroupElement::from_matrix(M, E, cfg);
}

// Automorphism sending an interior point to the origin.
inline GroupElement point_to_origin(const BallPoint& p,
                                    const Config& cfg = default_config()) {
  const int m = static_cast<int>(p.z.size());
  const double r = p.z.norm();
  if (r < 1e-300) return GroupElement::identity(m);
  GroupElement rot = make_k(unitary_completion(p.z / r).adjoint(), cfg);
  return make_a(m, -std::atanh(r)) * rot;
}

}  // namespace chball
