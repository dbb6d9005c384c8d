#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "evid/signed_log.hpp"
#include "oracles.hpp"

using evid::SignedLogValue;
using evid::signed_log_product;

TEST_CASE("signed_log_product: empty product is one") {
  const auto v = signed_log_product({});
  CHECK_FALSE(v.is_zero);
  CHECK(v.sign == 1);
  CHECK(v.log_magnitude == 0.0);
  CHECK(v.value() == 1.0);
}

TEST_CASE("signed_log_product: sign and magnitude") {
  const std::vector<double> gaps{-1, -2, 3};
  const auto v = signed_log_product(gaps);
  CHECK(v.sign == 1);
  CHECK(v.log_magnitude == doctest::Approx(std::log(6.0)).epsilon(1e-15));
  CHECK(v.value() == doctest::Approx(6.0).epsilon(1e-14));

  const std::vector<double> odd{-1, 2, 3};
  CHECK(signed_log_product(odd).sign == -1);
}

TEST_CASE("signed_log_product: any zero factor is an exact zero") {
  const std::vector<double> gaps{1e300, 0.0, 1e300};
  const auto v = signed_log_product(gaps);
  CHECK(v.is_zero);
  CHECK(v.value() == 0.0);
  CHECK((v * SignedLogValue::of(5.0)).is_zero);
  CHECK((v / SignedLogValue::of(5.0)).is_zero);
  CHECK_THROWS_AS(SignedLogValue::of(1.0) / v, std::domain_error);
}

TEST_CASE("signed_log_product: 10^4 gaps of 1e-3 stay finite where the plain product underflows") {
  const std::vector<double> gaps(10000, 1e-3);
  const std::span<const double> all(gaps);

  // A short prefix is representable, so the plain product is a valid oracle there.
  const auto prefix = all.first(50);
  const double naive_prefix = evid::oracle::naive_product(prefix);
  REQUIRE(naive_prefix > 0.0);
  const double prefix_log = signed_log_product(prefix).log_magnitude;
  CHECK(prefix_log == doctest::Approx(std::log(naive_prefix)).epsilon(1e-13));

  // Logs add, so the full product is 200 prefixes.
  const auto full = signed_log_product(all);
  CHECK(std::isfinite(full.log_magnitude));
  CHECK(full.log_magnitude == doctest::Approx(200.0 * prefix_log).epsilon(1e-12));
  CHECK(full.log_magnitude == doctest::Approx(1e4 * std::log(1e-3)).epsilon(1e-12));
  CHECK(evid::oracle::naive_product(all) == 0.0);
}

TEST_CASE("signed_log_product: concatenation multiplies, matching the plain product in range") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> mag(-3.0, 3.0);
  std::bernoulli_distribution neg(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a, b;
    for (int k = 0; k < 1 + trial % 30; ++k) a.push_back((neg(gen) ? -1 : 1) * std::exp(mag(gen)));
    for (int k = 0; k < trial % 17; ++k) b.push_back((neg(gen) ? -1 : 1) * std::exp(mag(gen)));
    std::vector<double> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());

    const auto whole = signed_log_product(ab);
    const auto split = signed_log_product(a) * signed_log_product(b);
    CHECK(whole.sign == split.sign);
    CHECK(whole.log_magnitude == doctest::Approx(split.log_magnitude).epsilon(1e-12).scale(1.0));

    const double naive = evid::oracle::naive_product(ab);
    CHECK(whole.value() == doctest::Approx(naive).epsilon(1e-12));
    const auto quotient = signed_log_product(ab) / signed_log_product(b);
    CHECK(quotient.value() == doctest::Approx(evid::oracle::naive_product(a)).epsilon(1e-12));
  }
}
