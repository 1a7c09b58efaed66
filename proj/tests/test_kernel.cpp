#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "paraberg/kernel.hpp"

using namespace paraberg;

namespace {

// frozen mpmath oracle values (tests/oracles/generate_oracles.py)
constexpr double kMomentW011[13] = {
    0.0375342618204904528,   0.00740088202267455957,  0.00229034343851896822,
    0.000880245865700656662, 0.00038628566828993239,  0.000185740759446093672,
    0.0000955631843993784946, 0.0000518207992141867349,
    0.0000293146772288568629, 0.0000171727150863643379,
    0.0000103606942582094243, 6.41079261111523362e-6, 4.05484392682249288e-6};
constexpr double kMomentW021[4] = {0.0212830352508285953, 0.00251590434058336896,
                                   0.000483154174770912758,
                                   0.000118094854483280138};
constexpr double kMomentW111[6] = {0.000547101236103776817,
                                   0.0000533345306487456473,
                                   8.58687872592732865e-6,
                                   1.77721993708326706e-6,
                                   4.30849936777199803e-7,
                                   1.16750850849169821e-7};

const WeightSpec kSpec011 = WeightSpec::parse("w0:1:1");

std::mt19937_64 rng(555);

TruncatedSeries rand_poly(int deg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v(deg + 1);
  for (auto& c : v) c = Complex{u(rng), u(rng)};
  return TruncatedSeries(std::move(v));
}

}  // namespace

TEST_CASE("moments against the frozen oracle") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 12, 1e-12);
  CHECK(t.all_converged);
  for (int j = 0; j <= 12; ++j) {
    CHECK(std::exp(t.log_alpha[j]) ==
          doctest::Approx(kMomentW011[j]).epsilon(1e-10));
  }
  for (int j = 0; j < 12; ++j) CHECK(t.log_alpha[j + 1] < t.log_alpha[j]);

  WeightEval w2(WeightSpec::parse("w0:2:1"));
  MomentTable t2 = moments(w2, 3, 1e-12);
  for (int j = 0; j <= 3; ++j)
    CHECK(std::exp(t2.log_alpha[j]) ==
          doctest::Approx(kMomentW021[j]).epsilon(1e-10));

  WeightEval w1(WeightSpec::parse("w1:1:1"));
  MomentTable t1 = moments(w1, 5, 1e-12);
  for (int j = 0; j <= 5; ++j)
    CHECK(std::exp(t1.log_alpha[j]) ==
          doctest::Approx(kMomentW111[j]).epsilon(1e-10));
}

TEST_CASE("moment determinism under truncation doubling") {
  WeightEval w(kSpec011);
  MomentTable a = moments(w, 24, 1e-12);
  MomentTable b = moments(w, 48, 1e-12);
  for (int j = 0; j <= 24; ++j) CHECK(a.log_alpha[j] == b.log_alpha[j]);
}

TEST_CASE("radius-of-convergence trend") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 256, 1e-12);
  // limsup alpha_j^{-1/j} <= 1: the per-j root must settle below ~1
  double tail_max = 0.0;
  for (int j = 128; j <= 256; ++j)
    tail_max = std::max(tail_max, std::exp(-t.log_alpha[j] / j));
  CHECK(tail_max < 1.5);
  double early = std::exp(-t.log_alpha[16] / 16.0);
  CHECK(tail_max < early);  // trending down toward 1
}

TEST_CASE("kernel series structure") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 128, 1e-12);
  // a = 0: only the constant term survives
  KernelSeries k0 = kernel_series({0.0, 0.0}, t, 64, 1e-10);
  CHECK(k0.series.coeff(0).real() ==
        doctest::Approx(1.0 / kMomentW011[0]).epsilon(1e-9));
  CHECK(k0.series.coeff(1) == Complex{0, 0});
  CHECK(k0.tail_bound == 0.0);
  // real positive a: all coefficients real positive
  KernelSeries kr = kernel_series({0.4, 0.0}, t, 128, 1e-10);
  for (int j = 0; j <= 16; ++j) {
    CHECK(kr.series.coeff(j).imag() == doctest::Approx(0.0));
    CHECK(kr.series.coeff(j).real() > 0.0);
  }
  // conjugate symmetry
  Complex a{0.3, 0.25};
  KernelSeries ka = kernel_series(a, t, 128, 1e-10);
  KernelSeries kc = kernel_series(std::conj(a), t, 128, 1e-10);
  for (int j = 0; j <= 32; ++j)
    CHECK(std::abs(ka.series.coeff(j) - std::conj(kc.series.coeff(j))) <=
          1e-12 * std::abs(ka.series.coeff(j)) + 1e-300);
}

TEST_CASE("tail control raises") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 32, 1e-12);
  CHECK_THROWS_AS(kernel_series({0.9, 0.0}, t, 32, 1e-10), TailTooLarge);
  CHECK_THROWS_AS(kernel_series({0.5, 0.0}, t, 40, 1e-10),
                  std::invalid_argument);  // cap beyond table
}

TEST_CASE("reproducing property") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 96, 1e-12);
  // monomials: the orthogonality route is exact up to moment rounding
  for (int k : {0, 1, 4, 9}) {
    for (double a : {0.0, 0.35, 0.6}) {
      double res = verify_reproducing(TruncatedSeries::monomial(k),
                                      {a, 0.0}, w, t);
      CHECK(res <= 1e-8);
    }
  }
  // general polynomial at a complex point
  std::vector<Complex> cs = {{1, 0}, {1, 0.5}};
  double res = verify_reproducing(TruncatedSeries(cs), {0.42, 0.31}, w, t);
  CHECK(res <= 1e-8);
  CHECK(verify_reproducing(TruncatedSeries::zero(4), {0.5, 0.0}, w, t) == 0.0);
}

TEST_CASE("diagonal ratio") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 512, 1e-12);
  // a = 0 closed form: tau(0)^2 omega(0) / alpha_0
  double expect =
      std::exp(2.0 * w.log_tau(0.0) + w.log_omega(0.0)) / kMomentW011[0];
  CHECK(diagonal_ratio({0.0, 0.0}, w, t) ==
        doctest::Approx(expect).epsilon(1e-9));
  // rotation invariance is exact (depends on |a| only)
  double d1 = diagonal_ratio({0.5, 0.0}, w, t);
  double d2 = diagonal_ratio({0.0, 0.5}, w, t);
  CHECK(d1 == d2);
  // comparability across the disc (two-sided kernel estimate territory)
  double d3 = diagonal_ratio({0.8, 0.0}, w, t);
  CHECK(std::max(d1, d3) / std::min(d1, d3) < 3.0);
  CHECK_THROWS_AS(diagonal_ratio({0.95, 0.0}, w, t, 0.9), std::invalid_argument);
}

TEST_CASE("kernel norm ratio") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 512, 1e-12);
  QuadratureConfig quad;
  // closed reduction at a = 0, p = 2: ||K_0||_2 = alpha_0^{-1/2}
  double expect = std::pow(kMomentW011[0], -0.5) *
                  std::exp(0.5 * w.log_omega(0.0) + w.log_tau(0.0));
  CHECK(kernel_norm_ratio({0.0, 0.0}, w, 2.0, t, 256, quad) ==
        doctest::Approx(expect).epsilon(1e-8));
  // rotation invariance within 1e-10 for all p paths
  for (double p : {1.0, 2.0, 4.0}) {
    double v1 = kernel_norm_ratio({0.45, 0.0}, w, p, t, 512, quad);
    Complex rot = 0.45 * Complex{std::cos(1.1), std::sin(1.1)};
    double v2 = kernel_norm_ratio(rot, w, p, t, 512, quad);
    CHECK(std::abs(v1 - v2) <= 1e-10 * v1);
  }
  // exact 1-homogeneity of the underlying norm under kernel rescaling
  KernelSeries ks = kernel_series({0.45, 0.0}, t, 512, 1e-10);
  double n1 = bergman_norm(ks.series, w, 2.0, WeightModifier::plain(2.0), quad)
                  .value;
  double n2 = bergman_norm(scale(ks.series, {3.0, 4.0}), w, 2.0,
                           WeightModifier::plain(2.0), quad)
                  .value;
  CHECK(n2 == doctest::Approx(5.0 * n1).epsilon(1e-12));
}

TEST_CASE("parseval wiring") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 24, 1e-12);
  QuadratureConfig quad;
  for (int trial = 0; trial < 5; ++trial) {
    TruncatedSeries f = rand_poly(10);
    double sum = 0.0;
    for (int k = 0; k <= 10; ++k)
      sum += std::norm(f.coeff(k)) * std::exp(t.log_alpha[k]);
    double nb =
        bergman_norm(f, w, 2.0, WeightModifier::plain(2.0), quad).value;
    CHECK(nb * nb == doctest::Approx(sum).epsilon(1e-9));
  }
}

TEST_CASE("cauchy-schwarz against the diagonal") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 64, 1e-12);
  for (int trial = 0; trial < 5; ++trial) {
    TruncatedSeries f = rand_poly(8);
    for (double a : {0.0, 0.3, 0.55}) {
      double fa2 = std::norm(evaluate(f, {a, 0.0}));
      double norm2 = 0.0;
      for (int k = 0; k <= 8; ++k)
        norm2 += std::norm(f.coeff(k)) * std::exp(t.log_alpha[k]);
      double kaa = 0.0;
      for (int j = 0; j <= 64; ++j)
        kaa += std::pow(a, 2 * j) * std::exp(-t.log_alpha[j]);
      CHECK(kaa * norm2 >= fa2 * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("offdiagonal profile") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 512, 1e-12);
  Complex a{0.5, 0.0};
  // at z = a the normalized value reproduces the diagonal ratio
  std::vector<OffdiagPoint> self = offdiag_profile(a, {a}, w, t, 512);
  CHECK(self[0].normalized ==
        doctest::Approx(diagonal_ratio(a, w, t)).epsilon(1e-8));
  CHECK(self[0].d_tau_upper == 0.0);
  // nearby points stay bounded below (local lower estimate territory)
  double delta = 0.2 * w.tau(0.5);
  std::vector<Complex> nearby = {a + Complex{delta, 0}, a + Complex{0, delta}};
  for (const OffdiagPoint& p : offdiag_profile(a, nearby, w, t, 512))
    CHECK(p.normalized >= 1e-3 * self[0].normalized);
  // decay exponent along a radial sweep is positive and grid-stable
  std::vector<Complex> zs, zs2;
  for (int i = 1; i <= 8; ++i) zs.push_back({0.5 + 0.045 * i, 0.0});
  for (int i = 1; i <= 16; ++i) zs2.push_back({0.5 + 0.0225 * i, 0.0});
  double eta1 = fit_decay_exponent(offdiag_profile(a, zs, w, t, 512));
  double eta2 = fit_decay_exponent(offdiag_profile(a, zs2, w, t, 512));
  CHECK(eta1 > 0.0);
  CHECK(eta2 > 0.0);
  CHECK(std::abs(eta1 - eta2) / eta2 < 0.5);
}

TEST_CASE("moment cache round trip") {
  WeightEval w(kSpec011);
  MomentTable t = moments(w, 16, 1e-12);
  MomentTable back = MomentTable::from_json(t.to_json());
  CHECK(back.J == 16);
  for (int j = 0; j <= 16; ++j) CHECK(back.log_alpha[j] == t.log_alpha[j]);
  CHECK(back.content_hash() == t.content_hash());
  // tampered payload is rejected
  std::string text = t.to_json();
  size_t pos = text.find("log_alpha");
  text.replace(text.find('-', pos), 1, "-1");
  CHECK_THROWS(MomentTable::from_json(text));
}
