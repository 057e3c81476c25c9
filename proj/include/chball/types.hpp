#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chball {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class ErrorKind { Precondition, Numerical, Degenerate, Io, Schema };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Every tolerance and budget used by the library, overridable from the CLI.
struct Config {
  double tol_group = 1e-10;   // U(m,1) membership / projective reconstruction
  double tol_bdry = 1e-9;     // boundary membership
  double tol_line = 1e-9;     // line membership and equality
  double tol_denom = 1e-12;   // fractional-linear denominator guard
  double tol_class = 1e-8;    // lambda1 > 1 + tol_class  <=>  loxodromic
  double tol_sym = 1e-8;      // symmetry-pair residual
  double tol_proper = 1e-9;   // properness deviation on the boundary grid
  double tol_det = 1e-6;      // detector matrix determinant guard
  double tol_rank = 1e-8;     // relative singular-value cutoff
  double tol_poly = 1e-8;     // witness polynomial vanishing
  double tol_u = 1e-3;        // ||U^n - Id|| for rescaling return times
  double rate_tol = 0.02;     // contraction-rate slope agreement
  double q_min = 1e-6;        // denominator lower bound on the closed ball

  std::uint64_t seed = 12345;

  int max_word_length = 12;
  std::size_t max_orbit_words = 2000000;
  int lambda1_max_iter = 500;
  int zariski_word_length = 5;
  std::size_t max_zariski_monomials = 4000;
};

inline const Config& default_config() {
  static const Config cfg;
  return cfg;
}

}  // namespace chball
