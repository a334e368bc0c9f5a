#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "teager/error.hpp"
#include "teager/tkeo.hpp"

using namespace teager;

TEST_SUITE("tkeo") {

TEST_CASE("examples") {
  const auto e = teager_energy(std::vector<double>{1, 2, 3});
  REQUIRE(e.size() == 1);
  CHECK(e[0] == 1.0);

  const auto c = teager_energy(std::vector<double>(7, 4.2));
  CHECK(c.size() == 5);
  for (double v : c) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

  const auto x = oracle::tone(200, 2.0, oracle::kPi / 5.0, 0.3);
  const auto t = teager_energy(x);
  REQUIRE(t.size() == 198);
  for (double v : t) CHECK(v == doctest::Approx(1.3819660112501051).epsilon(1e-9));
}

TEST_CASE("EnergySeries carries rate and offset") {
  const auto e = tkeo(TimeSeries(oracle::tone(50, 1.0, 0.4, 0.0), 128.0));
  CHECK(e.sample_rate_hz == 128.0);
  CHECK(e.valid_offset == 1);
  CHECK(e.values.size() == 48);
}

TEST_CASE("mean_tkeo") {
  CHECK(mean_tkeo(std::vector<double>{1.0, 2.0, 3.0}) == 2.0);
  CHECK(mean_tkeo(std::vector<double>{-1.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(mean_tkeo(std::vector<double>{}), Error);
  const auto x = oracle::white_noise(500, 1.0, 4);
  CHECK(mean_tkeo(tkeo(TimeSeries(x, 100.0))) == doctest::Approx(oracle::mean_energy(x)).epsilon(1e-12));
}

TEST_CASE("errors") {
  try {
    teager_energy(std::vector<double>{1.0, 2.0});
    FAIL("expected too-short");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::too_short);
  }
  CHECK_THROWS_AS(tkeo(TimeSeries({}, 1.0)), Error);
}

TEST_CASE("tone law over random parameters") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> amp(0.1, 10.0), om(0.05 * oracle::kPi, 0.95 * oracle::kPi),
      ph(0.0, 2.0 * oracle::kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = amp(rng), w = om(rng), p = ph(rng);
    const auto e = teager_energy(oracle::tone(256, a, w, p));
    const double expect = oracle::tone_energy(a, w);
    for (double v : e) CHECK(std::abs(v - expect) <= 1e-9 * expect);
  }
}

TEST_CASE("scaling, negation and phase invariance") {
  const auto x = oracle::white_noise(300, 1.0, 9);
  const auto base = teager_energy(x);
  for (double c : {-3.0, -1.0, 0.5, 7.0}) {
    std::vector<double> y(x);
    for (auto& v : y) v *= c;
    const auto s = teager_energy(y);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(c * c * base[i]).epsilon(1e-12));
  }
  const auto e1 = teager_energy(oracle::tone(100, 1.5, 0.7, 0.0));
  const auto e2 = teager_energy(oracle::tone(100, 1.5, 0.7, 2.1));
  for (std::size_t i = 0; i < e1.size(); ++i) CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-10));
}

}  // TEST_SUITE
