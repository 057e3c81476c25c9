#include <catch2/catch_amalgamated.hpp>

#include "chball/normal_forms.hpp"
#include "chball/random.hpp"
#include "chball/spectral.hpp"
#include "oracles.hpp"

using namespace chball;

namespace {

// vertical Heisenberg translation: exp of the rank-one nilpotent
// i*s*(e1+e_{m+1})(e1-e_{m+1})^H, which annihilates the null lift of e1
GroupElement unipotent_fixture(int m, double s) {
  const int n = m + 1;
  Vector v0 = unit_vector(n, 0) + unit_vector(n, n - 1);
  Vector w0 = unit_vector(n, 0) - unit_vector(n, n - 1);
  Matrix N = Complex(0.0, s) * (v0 * w0.adjoint());
  return GroupElement::from_matrix(m, Matrix::Identity(n, n) + N);
}

}  // namespace

TEST_CASE("sigma1 basics") {
  CHECK(sigma1(GroupElement::identity(2)) == Catch::Approx(1.0));
  CHECK(sigma1(make_a(2, std::log(2.0))) == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sigma1 is submultiplicative") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    auto g = random_group_element(2, rng);
    auto h = random_group_element(2, rng);
    CHECK(sigma1(g * h) <= sigma1(g) * sigma1(h) + 1e-10);
  }
}

TEST_CASE("lambda1 of K elements is 1") {
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    auto k = make_k(haar_unitary(2, rng));
    CHECK(lambda1(k) == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("lambda1 of k a_t is e^t") {
  Rng rng(47);
  const double t = 0.7;
  auto g = make_m(haar_unitary(1, rng)) * make_a(2, t);
  CHECK(lambda1(g) == Catch::Approx(std::exp(t)).epsilon(1e-9));
}

TEST_CASE("lambda1 agrees with the inverse and with the char-poly oracle") {
  Rng rng(53);
  for (int m : {2, 3}) {
    for (int i = 0; i < 40; ++i) {
      auto g = random_loxodromic(m, rng);
      const double l = lambda1(g);
      CHECK(std::abs(l - lambda1(g.inverse())) <= 1e-9 * l);
      const double brute = oracles::spectral_radius_brute(g.unitary_lift());
      CHECK(l == Catch::Approx(brute).epsilon(1e-9));
    }
  }
}

TEST_CASE("classify identity") {
  auto sd = classify(GroupElement::identity(2));
  CHECK(sd.kind == AutKind::Elliptic);
  REQUIRE(sd.interior_fixed.has_value());
  CHECK(sd.interior_fixed->z.norm() < 1e-12);
}

TEST_CASE("classify a_t") {
  auto sd = classify(make_a(2, 0.9));
  REQUIRE(sd.kind == AutKind::Loxodromic);
  Vector e1 = unit_vector(2, 0);
  CHECK((sd.fixed_plus->z - e1).norm() < 1e-9);
  CHECK((sd.fixed_minus->z + e1).norm() < 1e-9);
  auto axis = line_through(Vector(e1), Vector(-e1));
  CHECK(lines_equal(*sd.axis, axis));
  CHECK(sd.lambda1 == Catch::Approx(std::exp(0.9)).epsilon(1e-9));
}

TEST_CASE("classify a unipotent as parabolic") {
  for (double s : {0.5, 1.5}) {
    auto g = unipotent_fixture(2, s);
    CHECK(lambda1(g) == Catch::Approx(1.0).margin(1e-8));
    auto sd = classify(g);
    CHECK(sd.kind == AutKind::Parabolic);
    REQUIRE(sd.fixed_plus.has_value());
    // the unique boundary fixed point is e1
    CHECK((sd.fixed_plus->z - unit_vector(2, 0)).norm() < 1e-6);
    Vector img = act(g, sd.fixed_plus->z);
    CHECK((img - sd.fixed_plus->z).norm() < 1e-6);
  }
}

TEST_CASE("parabolic fixed point is unique (brute force roots)") {
  auto g = unipotent_fixture(2, 1.0);
  auto roots = oracles::poly_roots(oracles::char_poly(g.unitary_lift()));
  for (auto& r : roots) CHECK(std::abs(std::abs(r) - 1.0) < 1e-4);
}

TEST_CASE("fixed points of a_t and conjugates") {
  auto [xp, xm] = fixed_points_loxodromic(make_a(2, 0.6));
  CHECK((xp.z - unit_vector(2, 0)).norm() < 1e-10);
  CHECK((xm.z + unit_vector(2, 0)).norm() < 1e-10);

  Rng rng(59);
  for (int i = 0; i < 30; ++i) {
    auto h = random_group_element(2, rng);
    auto g = h * make_a(2, 0.8) * h.inverse();
    auto [yp, ym] = fixed_points_loxodromic(g);
    Vector he1 = act(h, Vector(unit_vector(2, 0)));
    Vector hme1 = act(h, Vector(-unit_vector(2, 0)));
    CHECK((yp.z - he1).norm() < 1e-9);
    CHECK((ym.z - hme1).norm() < 1e-9);
    CHECK((act(g, yp.z) - yp.z).norm() < 1e-9);
  }
}

TEST_CASE("fixed_points_loxodromic rejects non-loxodromic input") {
  CHECK_THROWS_AS(fixed_points_loxodromic(GroupElement::identity(2)), Error);
}

TEST_CASE("norm_at_origin formula") {
  CHECK(norm_at_origin(GroupElement::identity(2)) == Catch::Approx(0.0).margin(1e-14));
  CHECK(norm_at_origin(make_a(2, std::log(2.0))) == Catch::Approx(0.6).epsilon(1e-12));
  Rng rng(61);
  for (int i = 0; i < 300; ++i) {
    auto g = random_group_element(2, rng, 2.0);
    Vector g0 = act(g, Vector(Vector::Zero(2)));
    CHECK(std::abs(norm_at_origin(g) - g0.norm()) <= 1e-10);
  }
}

TEST_CASE("sigma1(g^n)^{1/n} decreases toward lambda1") {
  Rng rng(67);
  for (int i = 0; i < 20; ++i) {
    auto g = random_loxodromic(2, rng, 0.3, 0.8);
    const double lam = lambda1(g);
    double prev = std::numeric_limits<double>::infinity();
    GroupElement p = GroupElement::identity(2);
    for (int n : {1, 2, 4, 8, 16}) {
      GroupElement gn = g;
      for (int j = 1; j < n; ++j) gn = gn * g;
      const double v = std::pow(sigma1(gn), 1.0 / n);
      CHECK(v <= prev + 1e-8);
      CHECK(v >= lam - 1e-8);
      prev = v;
    }
  }
}

TEST_CASE("classification is conjugation invariant") {
  Rng rng(71);
  for (int i = 0; i < 25; ++i) {
    auto h = random_group_element(2, rng);
    auto g = random_loxodromic(2, rng);
    auto sd1 = classify(g);
    auto sd2 = classify(h * g * h.inverse());
    CHECK(sd1.kind == sd2.kind);
    CHECK(std::abs(sd1.lambda1 - sd2.lambda1) <= 1e-8 * sd1.lambda1);

    auto e = make_k(haar_unitary(2, rng));
    CHECK(classify(h * e * h.inverse()).kind == AutKind::Elliptic);
  }
}

TEST_CASE("boundary approach rate is -2 log lambda1") {
  Rng rng(73);
  for (int i = 0; i < 10; ++i) {
    auto g = random_loxodromic(2, rng, 0.25, 0.45);
    const double target = -2.0 * std::log(lambda1(g));
    std::vector<double> xs, ys;
    GroupElement gn = g;
    for (int n = 1; n <= 30; ++n) {
      if (n > 1) gn = gn * g;
      if (n >= 15) {
        Vector o = act(gn, Vector(Vector::Zero(2)));
        xs.push_back(n);
        ys.push_back(std::log(1.0 - o.norm()));
      }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t j = 0; j < xs.size(); ++j) {
      sx += xs[j];
      sy += ys[j];
      sxx += xs[j] * xs[j];
      sxy += xs[j] * ys[j];
    }
    const double nR = double(xs.size());
    const double slope = (nR * sxy - sx * sy) / (nR * sxx - sx * sx);
    CHECK(std::abs(slope - target) <= 0.02 * std::abs(target));
  }
}
