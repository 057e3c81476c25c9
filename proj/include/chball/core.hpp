#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "types.hpp"

namespace chball {

// J = diag(1, ..., 1, -1) of size m+1.
inline Matrix form_matrix(int m) {
  Matrix J = Matrix::Identity(m + 1, m + 1);
  J(m, m) = Complex(-1.0, 0.0);
  return J;
}

struct HermitianForm {
  int m = 1;
  Matrix J() const { return form_matrix(m); }
};

// [v,w]_{m,1} = v_1 conj(w_1) + ... + v_m conj(w_m) - v_{m+1} conj(w_{m+1})
inline Complex form_value(const Vector& v, const Vector& w,
                          const HermitianForm& form) {
  if (v.size() != form.m + 1 || w.size() != form.m + 1)
    throw Error(ErrorKind::Precondition,
                "form_value: expected vectors of length m+1");
  Complex s(0.0, 0.0);
  for (int i = 0; i < form.m; ++i) s += v(i) * std::conj(w(i));
  s -= v(form.m) * std::conj(w(form.m));
  return s;
}

inline Complex form_value(const Vector& v, const Vector& w) {
  if (v.size() != w.size() || v.size() < 2)
    throw Error(ErrorKind::Precondition, "form_value: dimension mismatch");
  return form_value(v, w, HermitianForm{static_cast<int>(v.size()) - 1});
}

// Projective lift of an automorphism of the ball.  The stored matrix is a
// scalar multiple of a U(m,1) matrix, normalized to Frobenius norm
// sqrt(m+1) with the largest-modulus entry rotated to the positive real
// axis, so equal group elements have (nearly) equal lifts.
class GroupElement {
 public:
  GroupElement() = default;

  static GroupElement from_matrix(int m, Matrix lift,
                                  const Config& cfg = default_config()) {
    if (m < 1) throw Error(ErrorKind::Precondition, "GroupElement: m >= 1");
    if (lift.rows() != m + 1 || lift.cols() != m + 1)
      throw Error(ErrorKind::Precondition,
                  "GroupElement: lift must be (m+1)x(m+1)");
    const Matrix J = form_matrix(m);
    const Matrix E = lift.adjoint() * J * lift;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) s += (E(i, i) * J(i, i)).real();
    s /= m + 1;
    const double scale2 = lift.squaredNorm();
    if (!(s > 0.0) || !std::isfinite(s))
      throw Error(ErrorKind::Precondition,
                  "GroupElement: matrix is not a scalar multiple of U(m,1)");
    if ((E - s * J).norm() > cfg.tol_group * scale2)
      throw Error(ErrorKind::Precondition,
                  "GroupElement: U(m,1) membership residual too large");
    GroupElement g;
    g.m_ = m;
    g.lift_ = std::move(lift);
    g.normalize();
    return g;
  }

  static GroupElement identity(int m) {
    return from_matrix(m, Matrix::Identity(m + 1, m + 1));
  }

  int m() const { return m_; }
  const Matrix& lift() const { return lift_; }

  // Block form [[A, b], [c^T, d]].
  Matrix block_a() const { return lift_.topLeftCorner(m_, m_); }
  Vector block_b() const { return lift_.topRightCorner(m_, 1); }
  Vector block_c() const { return lift_.bottomLeftCorner(1, m_).transpose(); }
  Complex block_d() const { return lift_(m_, m_); }

  // Scale s with lift^* J lift = s J.  Below the double-precision floor the
  // projective U(m,1) structure is unrecoverable and we refuse to guess.
  double j_scale() const {
    const Matrix J = form_matrix(m_);
    const Matrix E = lift_.adjoint() * J * lift_;
    double s = 0.0;
    for (int i = 0; i <= m_; ++i) s += (E(i, i) * J(i, i)).real();
    s /= m_ + 1;
    const double floor = 30.0 * (m_ + 1) * std::numeric_limits<double>::epsilon();
    if (!(s > floor))
      throw Error(ErrorKind::Numerical,
                  "GroupElement: projective scale below double precision");
    return s;
  }

  // The representative that actually lies in U(m,1) (up to phase).
  Matrix unitary_lift() const { return lift_ / std::sqrt(j_scale()); }

  // g^{-1} = J g^* J for g in U(m,1); no matrix inversion needed.
  GroupElement inverse() const {
    const Matrix J = form_matrix(m_);
    return from_matrix(m_, J * lift_.adjoint() * J);
  }

  friend GroupElement operator*(const GroupElement& g, const GroupElement& h) {
    if (g.m_ != h.m_)
      throw Error(ErrorKind::Precondition, "GroupElement: dimension mismatch");
    return from_matrix(g.m_, g.lift_ * h.lift_);
  }

 private:
  void normalize() {
    lift_ *= std::sqrt(double(m_ + 1)) / lift_.norm();
    // pin the phase: largest-modulus entry (first in row-major order) is
    // rotated onto the positive real axis
    int bi = 0, bj = 0;
    double best = -1.0;
    for (int i = 0; i <= m_; ++i)
      for (int j = 0; j <= m_; ++j)
        if (std::abs(lift_(i, j)) > best) {
          best = std::abs(lift_(i, j));
          bi = i;
          bj = j;
        }
    if (best > 0.0) lift_ *= std::conj(lift_(bi, bj)) / best;
  }

  int m_ = 0;
  Matrix lift_;
};

// Distance between projective classes: align phases through the Frobenius
// inner product, then compare.
inline double projective_distance(const GroupElement& g, const GroupElement& h) {
  if (g.m() != h.m())
    throw Error(ErrorKind::Precondition, "projective_distance: dimension mismatch");
  Complex ip = (h.lift().adjoint() * g.lift()).trace();
  Complex mu = (std::abs(ip) > 0.0) ? ip / std::abs(ip) : Complex(1.0, 0.0);
  return (g.lift() - mu * h.lift()).norm();
}

struct BallPoint {
  Vector z;

  BallPoint() = default;
  explicit BallPoint(Vector v, const Config& cfg = default_config()) : z(std::move(v)) {
    (void)cfg;
    if (!(z.norm() < 1.0))
      throw Error(ErrorKind::Precondition, "BallPoint: ||z|| < 1 required");
  }
};

struct BoundaryPoint {
  Vector z;

  BoundaryPoint() = default;
  explicit BoundaryPoint(const Vector& v, const Config& cfg = default_config()) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > cfg.tol_bdry)
      throw Error(ErrorKind::Precondition, "BoundaryPoint: ||z|| = 1 required");
    z = v / n;  // renormalized exactly onto the sphere
  }
};

// Complex affine line L = { base + lambda * dir }.  Canonical form: unit
// direction with its first nonzero entry real positive, base J-orthogonal to
// dir (the point of L closest to the origin).
class AffineLine {
 public:
  AffineLine() = default;

  static AffineLine from_base_dir(Vector base, Vector dir,
                                  const Config& cfg = default_config()) {
    if (base.size() != dir.size() || base.size() == 0)
      throw Error(ErrorKind::Precondition, "AffineLine: dimension mismatch");
    if (dir.norm() <= cfg.tol_line)
      throw Error(ErrorKind::Precondition, "AffineLine: zero direction");
    AffineLine L;
    L.base_ = std::move(base);
    L.dir_ = std::move(dir);
    L.canonicalize(cfg);
    return L;
  }

  const Vector& base() const { return base_; }
  const Vector& dir() const { return dir_; }

  // || (z - a) - <z - a, b> b ||
  double distance_to(const Vector& z) const {
    Vector d = z - base_;
    Complex coef = dir_.dot(d);  // conj(dir)^T d
    return (d - coef * dir_).norm();
  }

 private:
  // Each step is skipped when its condition already holds to a few ulps, so
  // one full pass over a canonical line changes nothing and canonicalization
  // is idempotent bit for bit.
  void canonicalize(const Config& cfg) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 4; ++it) {
      Vector b = dir_;
      const double n2 = b.squaredNorm();
      if (!(n2 > 0.0))
        throw Error(ErrorKind::Numerical, "AffineLine: direction collapsed");
      if (std::abs(n2 - 1.0) > 8.0 * eps) b /= std::sqrt(n2);
      int k = -1;
      for (int i = 0; i < b.size(); ++i)
        if (std::abs(b(i)) > cfg.tol_line) {
          k = i;
          break;
        }
      if (k < 0)
        throw Error(ErrorKind::Numerical, "AffineLine: direction collapsed");
      if (!(b(k).imag() == 0.0 && b(k).real() > 0.0)) {
        b *= std::conj(b(k)) / std::abs(b(k));
        b(k) = Complex(std::abs(b(k)), 0.0);
      }
      Vector a = base_;
      const Complex ip = b.dot(a);
      if (std::abs(ip) > 64.0 * eps * (1.0 + a.norm())) a -= ip * b;
      const bool stable = (a == base_) && (b == dir_);
      base_ = std::move(a);
      dir_ = std::move(b);
      if (stable) return;
    }
  }

  Vector base_;
  Vector dir_;
};

inline AffineLine line_through(const Vector& x, const Vector& y,
                               const Config& cfg = default_config()) {
  if ((x - y).norm() <= cfg.tol_line)
    throw Error(ErrorKind::Precondition, "line_through: x == y");
  return AffineLine::from_base_dir(x, y - x, cfg);
}

inline AffineLine line_through(const BoundaryPoint& x, const BoundaryPoint& y,
                               const Config& cfg = default_config()) {
  return line_through(x.z, y.z, cfg);
}

inline bool point_on_line(const AffineLine& L, const Vector& z, double tol) {
  return L.distance_to(z) <= tol;
}

inline bool lines_equal(const AffineLine& L1, const AffineLine& L2,
                        const Config& cfg = default_config()) {
  if (L1.base().size() != L2.base().size()) return false;
  return (L1.base() - L2.base()).norm() <= cfg.tol_line &&
         (L1.dir() - L2.dir()).norm() <= cfg.tol_line;
}

// g(z) = (A z + b) / (c^T z + d)
inline Vector act(const GroupElement& g, const Vector& z,
                  const Config& cfg = default_config()) {
  if (z.size() != g.m())
    throw Error(ErrorKind::Precondition, "act: point dimension mismatch");
  const int m = g.m();
  Complex den = g.block_d();
  den += (g.lift().row(m).head(m) * z)(0, 0);
  if (std::abs(den) < cfg.tol_denom)
    throw Error(ErrorKind::Degenerate,
                "act: vanishing denominator (point outside the closed ball?)");
  Vector num = g.block_a() * z + g.block_b();
  return num / den;
}

inline BallPoint act(const GroupElement& g, const BallPoint& z,
                     const Config& cfg = default_config()) {
  return BallPoint(act(g, z.z, cfg), cfg);
}

inline BoundaryPoint act(const GroupElement& g, const BoundaryPoint& z,
                         const Config& cfg = default_config()) {
  return BoundaryPoint(act(g, z.z, cfg), cfg);
}

inline Vector unit_vector(int m, int i) {
  Vector e = Vector::Zero(m);
  e(i) = Complex(1.0, 0.0);
  return e;
}

}  // namespace chball
