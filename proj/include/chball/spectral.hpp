#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "core.hpp"

namespace chball {

enum class AutKind { Elliptic, Parabolic, Loxodromic };

inline const char* to_string(AutKind k) {
  switch (k) {
    case AutKind::Elliptic: return "Elliptic";
    case AutKind::Parabolic: return "Parabolic";
    case AutKind::Loxodromic: return "Loxodromic";
  }
  return "?";
}

struct SpectralData {
  AutKind kind = AutKind::Elliptic;
  double lambda1 = 1.0;
  double sigma1 = 1.0;
  std::optional<BoundaryPoint> fixed_plus;   // loxodromic, parabolic
  std::optional<BoundaryPoint> fixed_minus;  // loxodromic
  std::optional<BallPoint> interior_fixed;   // elliptic
  std::optional<AffineLine> axis;            // loxodromic
};

// Top singular value of the U(m,1) representative; phase independent.
inline double sigma1(const GroupElement& g) {
  Eigen::JacobiSVD<Matrix> svd(g.unitary_lift());
  return svd.singularValues()(0);
}

namespace detail {

enum class RichardsonStatus { Converged, Corrupted, Exhausted };

// log sigma1(g^{2^k}) / 2^k by repeated squaring; the lift is rescaled to
// Frobenius norm sqrt(m+1) after every product and the scale is tracked in
// log space so entries never overflow.  Squaring a parabolic power
// eventually cancels catastrophically (the iterate collapses onto a
// nilpotent direction); that is detected and reported instead of letting the
// sequence stall on rounding noise.
inline RichardsonStatus log_lambda1_richardson(const GroupElement& g, int k_max,
                                               double rel_tol, double* out) {
  const int n = g.m() + 1;
  Matrix B = g.unitary_lift();
  double log_scale = 0.0;  // log of the factor taken out of B
  double prev = std::numeric_limits<double>::infinity();
  double cur = prev;
  for (int k = 0; k <= k_max; ++k) {
    Eigen::JacobiSVD<Matrix> svd(B);
    const double log_sigma = std::log(svd.singularValues()(0)) + log_scale;
    cur = log_sigma / std::pow(2.0, k);
    *out = cur;
    if (k > 0 && std::abs(prev - cur) <= rel_tol * std::max(1.0, std::abs(cur)))
      return RichardsonStatus::Converged;
    prev = cur;
    Matrix B2 = B * B;
    const double f = B2.norm() / std::sqrt(double(n));
    if (!(f > 1e-10 * B.squaredNorm() / std::sqrt(double(n))))
      return RichardsonStatus::Corrupted;
    B = B2 / f;
    log_scale = 2.0 * log_scale + std::log(f);
  }
  return RichardsonStatus::Exhausted;
}

// Power iteration for the dominant eigenvalue modulus.  Returns false when
// the dominant eigenvalue is not isolated enough to converge.
inline bool power_iteration_lambda(const Matrix& u, int max_iter, double* out) {
  const int n = static_cast<int>(u.rows());
  Vector v = Vector::Ones(n);
  for (int i = 0; i < n; ++i) v(i) += Complex(0.013 * (i + 1), 0.007 * (i + 1));
  v /= v.norm();
  Complex lam(0.0, 0.0);
  for (int it = 0; it < max_iter; ++it) {
    Vector w = u * v;
    Complex lam_new = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return false;
    w /= wn;
    const double step = (w - v * (v.dot(w))).norm();
    v = w;
    if (it > 4 && std::abs(lam_new - lam) <= 1e-13 * std::abs(lam_new) &&
        step <= 1e-12) {
      const double resid = (u * v - lam_new * v).norm();
      if (resid <= 1e-10 * std::abs(lam_new)) {
        *out = std::abs(lam_new);
        return true;
      }
    }
    lam = lam_new;
  }
  return false;
}

}  // namespace detail

// Spectral radius of the U(m,1) representative.  Dominant-eigenvalue power
// iteration first; when the top eigenvalue is not isolated (elliptic,
// parabolic, or nearly so) fall back to sigma1(g^{2^k})^{1/2^k}, which is
// monotone by submultiplicativity.  If the squaring loses precision before
// the sequence settles, the full spectrum (orthogonal-similarity reduction)
// breaks the tie: a loxodromic with resolvable t >= 1e-7 shows eigenvalue
// moduli e^{+-t} well above the defective-eigenvalue noise floor, while a
// parabolic shows all moduli within sqrt(eps) of 1.
inline double lambda1(const GroupElement& g,
                      const Config& cfg = default_config()) {
  const Matrix u = g.unitary_lift();
  double lam = 0.0;
  if (detail::power_iteration_lambda(u, cfg.lambda1_max_iter, &lam)) {
    return std::max(lam, 1.0);
  }
  double log_lam = 0.0;
  const auto status = detail::log_lambda1_richardson(g, 46, 1e-13, &log_lam);
  if (status != detail::RichardsonStatus::Converged) {
    Eigen::ComplexEigenSolver<Matrix> es(u);
    double rho = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    if (log_lam <= 1e-4 && rho <= 1.0 + 1e-7) return 1.0;
    std::ostringstream os;
    os << "lambda1: no convergence; bracket [1, " << std::exp(log_lam) << "]";
    throw Error(ErrorKind::Numerical, os.str());
  }
  const double value = std::exp(log_lam);
  if (value < 1.0 - 1e-6)
    throw Error(ErrorKind::Numerical, "lambda1: spectral radius below 1");
  return std::max(value, 1.0);
}

namespace detail {

struct EigenPairs {
  std::vector<Complex> values;
  Matrix vectors;  // columns
};

inline EigenPairs eigen_of_lift(const GroupElement& g) {
  Eigen::ComplexEigenSolver<Matrix> es(g.lift());
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::Numerical, "eigen solve failed");
  EigenPairs out;
  out.vectors = es.eigenvectors();
  const auto& ev = es.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  return out;
}

// Dehomogenize a projective vector; boundary/interior fixed points always
// have a nonzero last coordinate.
inline Vector dehomogenize(const Vector& v) {
  const int m = static_cast<int>(v.size()) - 1;
  if (std::abs(v(m)) < 1e-14 * v.norm())
    throw Error(ErrorKind::Numerical, "dehomogenize: point at infinity");
  return v.head(m) / v(m);
}

}  // namespace detail

// Attracting / repelling boundary fixed points of a loxodromic element, from
// the top- and bottom-modulus eigenvectors of the lift (scale free).
inline std::pair<BoundaryPoint, BoundaryPoint> fixed_points_loxodromic(
    const GroupElement& g, const Config& cfg = default_config()) {
  auto ep = detail::eigen_of_lift(g);
  int imax = 0, imin = 0;
  for (int i = 1; i < static_cast<int>(ep.values.size()); ++i) {
    if (std::abs(ep.values[i]) > std::abs(ep.values[imax])) imax = i;
    if (std::abs(ep.values[i]) < std::abs(ep.values[imin])) imin = i;
  }
  const double ratio = std::abs(ep.values[imax]) / std::abs(ep.values[imin]);
  if (!(ratio > std::pow(1.0 + cfg.tol_class, 2)))
    throw Error(ErrorKind::Precondition,
                "fixed_points_loxodromic: element is not loxodromic");
  Vector vp = detail::dehomogenize(ep.vectors.col(imax));
  Vector vm = detail::dehomogenize(ep.vectors.col(imin));
  return {BoundaryPoint(vp, cfg), BoundaryPoint(vm, cfg)};
}

// Elliptic / parabolic / loxodromic per the lambda1 > 1 criterion; in the
// lambda1 = 1 case the type is decided by the sign of the form on
// eigenvectors (a negative-type eigenvector projects to an interior fixed
// point).  Eigenvalues are clustered first so that repeated eigenvalues of
// elliptic elements cannot hide the negative vector.
inline SpectralData classify(const GroupElement& g,
                             const Config& cfg = default_config()) {
  SpectralData sd;
  sd.sigma1 = sigma1(g);
  sd.lambda1 = lambda1(g, cfg);
  const int m = g.m();
  const Matrix J = form_matrix(m);

  if (sd.lambda1 > 1.0 + cfg.tol_class) {
    sd.kind = AutKind::Loxodromic;
    auto [xp, xm] = fixed_points_loxodromic(g, cfg);
    sd.axis = line_through(xp, xm, cfg);
    sd.fixed_plus = std::move(xp);
    sd.fixed_minus = std::move(xm);
    return sd;
  }

  auto ep = detail::eigen_of_lift(g);
  const int n = m + 1;
  double vmax = 0.0;
  for (auto& v : ep.values) vmax = std::max(vmax, std::abs(v));
  std::vector<int> cluster(n, -1);
  int nclusters = 0;
  for (int i = 0; i < n; ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = nclusters;
    for (int j = i + 1; j < n; ++j)
      if (cluster[j] < 0 && std::abs(ep.values[i] - ep.values[j]) <= 1e-7 * vmax)
        cluster[j] = nclusters;
    ++nclusters;
  }

  // within each eigenspace, diagonalize the restricted form; the raw
  // eigenvector collection of a defective cluster is nearly rank deficient,
  // so it is orthonormalized with rank truncation first
  double most_negative = 0.0;
  Vector negative_vec;
  double best_null = std::numeric_limits<double>::infinity();
  Vector null_vec;
  for (int c = 0; c < nclusters; ++c) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (cluster[i] == c) idx.push_back(i);
    Matrix V(n, idx.size());
    for (size_t k = 0; k < idx.size(); ++k) V.col(k) = ep.vectors.col(idx[k]);
    Eigen::JacobiSVD<Matrix> sv(V, Eigen::ComputeThinU);
    int rank = 0;
    for (int k = 0; k < sv.singularValues().size(); ++k)
      if (sv.singularValues()(k) >= 1e-7 * sv.singularValues()(0)) ++rank;
    Matrix Q = sv.matrixU().leftCols(rank);
    Matrix H = Q.adjoint() * J * Q;
    Eigen::SelfAdjointEigenSolver<Matrix> sh(H);
    for (int k = 0; k < sh.eigenvalues().size(); ++k) {
      const double mu = sh.eigenvalues()(k);
      Vector w = Q * sh.eigenvectors().col(k);
      if (mu < most_negative) {
        most_negative = mu;
        negative_vec = w;
      }
      if (std::abs(mu) < best_null) {
        best_null = std::abs(mu);
        null_vec = w;
      }
    }
  }

  if (most_negative < -cfg.tol_class) {
    sd.kind = AutKind::Elliptic;
    sd.interior_fixed = BallPoint(detail::dehomogenize(negative_vec), cfg);
    return sd;
  }
  if (best_null <= 1e-6) {
    sd.kind = AutKind::Parabolic;
    Vector p = detail::dehomogenize(null_vec);
    sd.fixed_plus = BoundaryPoint(p / p.norm(), cfg);
    return sd;
  }
  throw Error(ErrorKind::Numerical,
              "classify: numerically borderline element (lambda1 within "
              "tol_class of 1, no decisive eigenvector)");
}

// ||g(0)|| = (sigma1^2 - 1) / (sigma1^2 + 1)
inline double norm_at_origin(const GroupElement& g) {
  const double s2 = sigma1(g) * sigma1(g);
  return (s2 - 1.0) / (s2 + 1.0);
}

}  // namespace chball
