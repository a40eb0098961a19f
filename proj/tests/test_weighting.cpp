#include <doctest.h>

#include <cmath>
#include <vector>

#include "chordgram/rng.hpp"
#include "chordgram/weighting.hpp"

using namespace chordgram;

TEST_CASE("weight_proximity: exponential decay of the total span") {
  const std::vector<double> unit = {1.0};
  CHECK(weight_proximity(unit, 1.0) ==
        doctest::Approx(0.367879441).epsilon(1e-6));

  const std::vector<double> two = {0.75, 1.25};  // span 2.0
  CHECK(weight_proximity(two, 1.0) ==
        doctest::Approx(0.135335283).epsilon(1e-6));

  const std::vector<double> tiny = {1e-9};
  CHECK(weight_proximity(tiny, 1.0) == doctest::Approx(1.0));

  // Strictly decreasing in the span.
  double prev = 2.0;
  for (double span = 0.1; span < 5.0; span += 0.1) {
    const std::vector<double> ioi = {span};
    const double w = weight_proximity(ioi, 1.0);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("weight_periodicity: min/max IOI ratio") {
  const std::vector<double> equal = {0.5, 0.5, 0.5};
  CHECK(weight_periodicity(equal) == 1.0);

  const std::vector<double> mixed = {0.25, 0.5, 1.0};
  CHECK(weight_periodicity(mixed) == doctest::Approx(0.25));

  const std::vector<double> single = {0.73};
  CHECK(weight_periodicity(single) == 1.0);
}

TEST_CASE("weight_periodicity: scale invariant") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> iois;
    const int n = static_cast<int>(rng.uniform_int(1, 6));
    for (int i = 0; i < n; ++i) iois.push_back(0.05 + rng.uniform() * 2.0);
    const double base = weight_periodicity(iois);
    const double c = 0.1 + rng.uniform() * 10.0;
    for (auto& x : iois) x *= c;
    CHECK(weight_periodicity(iois) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("weight_resonance: log-Gaussian peaking at p0") {
  const std::vector<double> at_peak = {0.5, 0.5};
  CHECK(weight_resonance(at_peak, 0.5, 1.0) == doctest::Approx(1.0));

  const std::vector<double> octave_up = {1.0};  // log2(2) = 1
  CHECK(weight_resonance(octave_up, 0.5, 1.0) ==
        doctest::Approx(0.606530660).epsilon(1e-6));

  // Half and double the peak period resonate equally; the geometric mean
  // keeps the value at exp(-0.5).
  const std::vector<double> symmetric = {0.25, 1.0};
  CHECK(weight_resonance(symmetric, 0.5, 1.0) ==
        doctest::Approx(0.606530660).epsilon(1e-6));
}

TEST_CASE("weight_resonance: symmetric in log-period around p0") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const double p0 = 0.2 + rng.uniform();
    const double sigma = 0.3 + rng.uniform();
    const double d = rng.uniform() * 3.0;
    const std::vector<double> up = {p0 * std::exp2(d)};
    const std::vector<double> down = {p0 * std::exp2(-d)};
    CHECK(std::abs(weight_resonance(up, p0, sigma) -
                   weight_resonance(down, p0, sigma)) < 1e-12);
  }
}

TEST_CASE("all schemes stay in (0, 1]") {
  SplitMix64 rng(13);
  WeightScheme proximity{WeightKind::kProximity};
  WeightScheme periodicity{WeightKind::kPeriodicity};
  WeightScheme resonance{WeightKind::kResonance};
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(2, 6));
    std::vector<double> onsets = {rng.uniform()};
    for (int i = 1; i < n; ++i)
      onsets.push_back(onsets.back() + 0.01 + rng.uniform() * 2.0);
    for (const auto& scheme : {proximity, periodicity, resonance}) {
      const double w = instance_weight(scheme, onsets);
      CHECK(w > 0.0);
      CHECK(w <= 1.0);
    }
    CHECK(instance_weight(WeightScheme{}, onsets) == 1.0);
  }
}

TEST_CASE("weight_none ignores performance data entirely") {
  const WeightScheme none{};
  CHECK(instance_weight(none, std::vector<double>{}) == 1.0);
  CHECK(instance_weight(none, std::vector<double>{1.0, 2.0}) == 1.0);
  CHECK_FALSE(none.requires_performance());
}

TEST_CASE("nonpositive IOIs are data errors") {
  const std::vector<double> zero = {0.0};
  const std::vector<double> negative = {0.5, -0.1};
  CHECK_THROWS_AS(weight_periodicity(zero), Error);
  CHECK_THROWS_AS(weight_proximity(negative, 1.0), Error);
  CHECK_THROWS_AS(weight_resonance(zero, 0.5, 1.0), Error);
}

TEST_CASE("instance weights derive from consecutive onset differences") {
  WeightScheme periodicity{WeightKind::kPeriodicity};
  const std::vector<double> onsets = {1.0, 1.25, 1.75, 2.75};
  // IOIs 0.25, 0.5, 1.0.
  CHECK(instance_weight(periodicity, onsets) == doctest::Approx(0.25));

  WeightScheme proximity{WeightKind::kProximity};
  proximity.tau = 1.0;
  CHECK(instance_weight(proximity, onsets) ==
        doctest::Approx(std::exp(-1.75)));
}
