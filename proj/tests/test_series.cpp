#include <doctest.h>

#include <cmath>
#include <random>

#include "paraberg/series.hpp"

using namespace paraberg;

namespace {

TruncatedSeries real_poly(std::initializer_list<double> cs) {
  std::vector<Complex> v;
  for (double c : cs) v.emplace_back(c, 0.0);
  return TruncatedSeries(std::move(v));
}

std::mt19937_64 rng(42);

Complex rand_c() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Complex{u(rng), u(rng)};
}

TruncatedSeries rand_poly(int deg) {
  std::vector<Complex> v(deg + 1);
  for (auto& c : v) c = rand_c();
  return TruncatedSeries(std::move(v));
}

}  // namespace

TEST_CASE("cauchy product basics") {
  TruncatedSeries one_z = real_poly({1, 1});
  TruncatedSeries sq = cauchy_product(one_z, one_z, 2);
  CHECK(sq.coeff(0) == Complex{1, 0});
  CHECK(sq.coeff(1) == Complex{2, 0});
  CHECK(sq.coeff(2) == Complex{1, 0});

  TruncatedSeries f = rand_poly(6);
  TruncatedSeries id = cauchy_product(f, TruncatedSeries::one(), 6);
  CHECK(max_coeff_diff(f, id) == 0.0);

  TruncatedSeries g = cauchy_product(real_poly({1, 1, 1}), real_poly({1, -1}), 3);
  CHECK(g.coeff(0) == Complex{1, 0});
  CHECK(g.coeff(1) == Complex{0, 0});
  CHECK(g.coeff(2) == Complex{0, 0});
  CHECK(g.coeff(3) == Complex{-1, 0});
}

TEST_CASE("product degree bookkeeping") {
  TruncatedSeries a = rand_poly(4);
  TruncatedSeries b = rand_poly(3);
  TruncatedSeries ab = cauchy_product(a, b, 16);
  CHECK(ab.effective_degree() == 7);
}

TEST_CASE("derivative and primitive") {
  CHECK(max_coeff_diff(derivative(TruncatedSeries::monomial(3)),
                       scale(TruncatedSeries::monomial(2), 3.0)) == 0.0);
  CHECK(derivative(real_poly({5})).is_zero());
  CHECK(max_coeff_diff(primitive0(TruncatedSeries::one()),
                       TruncatedSeries::monomial(1)) == 0.0);
  CHECK(max_coeff_diff(primitive0(TruncatedSeries::monomial(1)),
                       scale(TruncatedSeries::monomial(2), 0.5)) == 0.0);
  CHECK(max_coeff_diff(primitive0(scale(TruncatedSeries::monomial(2), 3.0)),
                       TruncatedSeries::monomial(3)) == 0.0);
  // inverse pair
  TruncatedSeries f = rand_poly(8);
  CHECK(max_coeff_diff(derivative(primitive0(f)), f) == 0.0);
}

TEST_CASE("evaluate") {
  CHECK(evaluate(real_poly({1, 1}), Complex{0.5, 0}) == Complex{1.5, 0});
  Complex i4 = evaluate(TruncatedSeries::monomial(4), Complex{0, 1});
  CHECK(std::abs(i4 - Complex{1, 0}) < 1e-15);
  // linearity
  for (int t = 0; t < 20; ++t) {
    TruncatedSeries f = rand_poly(7), g = rand_poly(7);
    Complex z = 0.7 * rand_c();
    Complex lhs = evaluate(add(f, g), z);
    Complex rhs = evaluate(f, z) + evaluate(g, z);
    CHECK(std::abs(lhs - rhs) <= 1e-14);
  }
  // agreement with the coefficient sum
  for (int t = 0; t < 20; ++t) {
    TruncatedSeries f = rand_poly(9);
    Complex z = 0.9 * rand_c();
    Complex direct{0, 0};
    Complex zk{1, 0};
    double scale_sum = 0.0;
    for (int k = 0; k <= f.cap(); ++k) {
      direct += f.coeff(k) * zk;
      zk *= z;
      scale_sum += std::abs(f.coeff(k));
    }
    CHECK(std::abs(evaluate(f, z) - direct) <= 1e-12 * scale_sum);
  }
}

TEST_CASE("dilate") {
  TruncatedSeries f = rand_poly(6);
  CHECK(max_coeff_diff(dilate(f, 1.0), f) == 0.0);
  CHECK(max_coeff_diff(dilate(TruncatedSeries::monomial(2), 0.5),
                       scale(TruncatedSeries::monomial(2), 0.25)) == 0.0);
  TruncatedSeries a = dilate(dilate(f, 0.8), 0.5);
  TruncatedSeries b = dilate(f, 0.4);
  CHECK(max_coeff_diff(a, b) <= 1e-15 * max_abs_coeff(f));
  CHECK_THROWS_AS(dilate(f, 0.0), std::domain_error);
  CHECK_THROWS_AS(dilate(f, 1.5), std::domain_error);
}

TEST_CASE("power") {
  TruncatedSeries g = rand_poly(3);
  CHECK(max_coeff_diff(power(g, 0, 8), TruncatedSeries::one().truncated(8)) ==
        0.0);
  TruncatedSeries sq = power(real_poly({1, 1}), 2, 4);
  CHECK(sq.coeff(0) == Complex{1, 0});
  CHECK(sq.coeff(1) == Complex{2, 0});
  CHECK(sq.coeff(2) == Complex{1, 0});
  CHECK(max_coeff_diff(power(TruncatedSeries::monomial(1), 3, 4),
                       TruncatedSeries::monomial(3).truncated(4)) == 0.0);
  // repeated squaring agrees with the naive product
  TruncatedSeries naive = TruncatedSeries::one();
  for (int i = 0; i < 5; ++i) naive = cauchy_product(naive, g, 20);
  CHECK(max_coeff_diff(power(g, 5, 20), naive) <=
        1e-12 * max_abs_coeff(naive));
}

TEST_CASE("max modulus") {
  for (int k : {1, 3, 7}) {
    CHECK(max_modulus(TruncatedSeries::monomial(k), 0.5) ==
          doctest::Approx(std::pow(0.5, k)).epsilon(1e-9));
  }
  CHECK(max_modulus(real_poly({-3.25}), 0.7) == doctest::Approx(3.25));
  CHECK(max_modulus(real_poly({1, 1}), 0.5) ==
        doctest::Approx(1.5).epsilon(1e-9));
  // nondecreasing in r (maximum principle)
  TruncatedSeries f = rand_poly(5);
  double prev = 0.0;
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    double m = max_modulus(f, r);
    CHECK(m >= prev - 1e-12);
    prev = m;
  }
}

TEST_CASE("poly parsing") {
  TruncatedSeries f = parse_poly("poly:1,0,2");
  CHECK(f.coeff(0) == Complex{1, 0});
  CHECK(f.coeff(1) == Complex{0, 0});
  CHECK(f.coeff(2) == Complex{2, 0});
  CHECK(max_coeff_diff(parse_poly("3,-1.5"), real_poly({3, -1.5})) == 0.0);
  CHECK_THROWS_AS(parse_poly("poly:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("poly:1,x"), std::invalid_argument);
}

TEST_CASE("H0 membership") {
  CHECK(TruncatedSeries::monomial(2).in_H0());
  CHECK(!real_poly({1, 1}).in_H0());
  CHECK(TruncatedSeries::zero(4).in_H0());
}
