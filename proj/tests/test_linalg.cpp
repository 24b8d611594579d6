#include <doctest.h>

#include "sheafcalc/linalg.hpp"
#include "sheafcalc/random_gen.hpp"

using namespace sheafcalc;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("rational parsing accepts p/q and integers, rejects floats") {
  CHECK(rational_from_string("1/2") == q(1, 2));
  CHECK(rational_from_string("-3") == q(-3));
  CHECK(rational_from_string("6/4") == q(3, 2));
  CHECK_THROWS_AS(rational_from_string("1.5"), Error);
  CHECK_THROWS_AS(rational_from_string("1e3"), Error);
  CHECK_THROWS_AS(rational_from_string("1/0"), Error);
  CHECK_THROWS_AS(rational_from_string(""), Error);
  CHECK(rational_to_string(q(-3, 7)) == "-3/7");
}

TEST_CASE("rref computes rank and pivots") {
  RatMatrix m{{q(1), q(2), q(3)}, {q(2), q(4), q(6)}, {q(1), q(0), q(1)}};
  CHECK(rank(m) == 2);
  CHECK(rank(RatMatrix::identity(4)) == 4);
  CHECK(rank(RatMatrix(3, 3)) == 0);
}

TEST_CASE("kernel basis spans the right kernel") {
  RatMatrix m{{q(1), q(2), q(3)}, {q(2), q(4), q(6)}};
  const RatMatrix k = kernel_basis(m);
  CHECK(k.cols() == 2);
  CHECK((m * k).is_zero());

  Rng rng = seeded_rng(7);
  for (int t = 0; t < 20; ++t) {
    RatMatrix a(3 + pick(rng, 3), 3 + pick(rng, 3));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = random_rational(rng);
    const RatMatrix kb = kernel_basis(a);
    CHECK((a * kb).is_zero());
    CHECK(rank(a) + kb.cols() == a.cols());
  }
}

TEST_CASE("exact inverse round-trips") {
  Rng rng = seeded_rng(11);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + pick(rng, 4);
    const RatMatrix m = random_invertible(rng, n);
    CHECK(m * inverse(m) == RatMatrix::identity(n));
  }
  RatMatrix singular{{q(1), q(2)}, {q(2), q(4)}};
  CHECK_THROWS_AS(inverse(singular), Error);
  CHECK_FALSE(is_invertible(singular));
}

TEST_CASE("spectrum of symmetric matrices is real ascending") {
  RealMatrix lap{{1.0, -1.0}, {-1.0, 1.0}};
  const auto eigs = spectrum(lap);
  REQUIRE(eigs.size() == 2);
  CHECK(eigs[0].real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eigs[1].real() == doctest::Approx(2.0));
  CHECK(eigs[0].imag() == 0.0);

  RealMatrix m2{{4.0, -2.0}, {-2.0, 1.0}};
  const auto eigs2 = spectrum(m2);
  CHECK(eigs2[0].real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eigs2[1].real() == doctest::Approx(5.0));

  // Complete graph on three vertices: 0, 3, 3.
  RealMatrix k3{{2.0, -1.0, -1.0}, {-1.0, 2.0, -1.0}, {-1.0, -1.0, 2.0}};
  const auto eigs3 = spectrum(k3);
  CHECK(eigs3[0].real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eigs3[1].real() == doctest::Approx(3.0));
  CHECK(eigs3[2].real() == doctest::Approx(3.0));
}

TEST_CASE("spectrum of asymmetric matrices sorts by (real, imag)") {
  // Rotation by 90 degrees: eigenvalues +-i.
  RealMatrix rot{{0.0, -1.0}, {1.0, 0.0}};
  const auto eigs = spectrum(rot);
  REQUIRE(eigs.size() == 2);
  CHECK(eigs[0].imag() == doctest::Approx(-1.0));
  CHECK(eigs[1].imag() == doctest::Approx(1.0));

  const auto zero = spectrum(RealMatrix(3, 3));
  for (const auto& e : zero) CHECK(std::abs(e) == doctest::Approx(0.0));
}

TEST_CASE("scale-aware float comparison") {
  RealMatrix a{{1e6, 0.0}, {0.0, 1.0}};
  RealMatrix b = a;
  b(0, 0) += 5e-4;
  CHECK(float_matrices_close(a, b, 1e-9));
  b(0, 0) += 1.0;
  CHECK_FALSE(float_matrices_close(a, b, 1e-9));
}
