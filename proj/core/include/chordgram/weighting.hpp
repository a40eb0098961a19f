#ifndef CHORDGRAM_WEIGHTING_HPP
#define CHORDGRAM_WEIGHTING_HPP

#include <span>
#include <string>

#include "chordgram/error.hpp"

namespace chordgram {

enum class WeightKind { kNone, kProximity, kPeriodicity, kResonance };

struct WeightScheme {
  WeightKind kind = WeightKind::kNone;
  double tau = 1.0;    // proximity decay constant, seconds
  double p0 = 0.5;     // resonance peak period, seconds
  double sigma = 1.0;  // resonance width, octaves

  bool requires_performance() const { return kind != WeightKind::kNone; }
};

std::string to_string(WeightKind kind);
WeightKind parse_weight_kind(const std::string& text);

// All weights live in (0, 1]. Inter-onset intervals must be positive.

/// exp(-span/tau) where span is the sum of the IOIs (first-to-last distance).
double weight_proximity(std::span<const double> iois, double tau);

/// min(IOI)/max(IOI); 1 exactly when all IOIs are equal, hence 1 for a
/// single interval.
double weight_periodicity(std::span<const double> iois);

/// Geometric mean over IOIs of exp(-(log2(x/p0))^2 / (2 sigma^2)); peaks at
/// 1 when every IOI equals p0, symmetric in log-period around p0.
double weight_resonance(std::span<const double> iois, double p0, double sigma);

/// Weight of an instance from the performance onsets of its selected
/// slices. The none scheme ignores the onsets entirely and returns 1.
double instance_weight(const WeightScheme& scheme,
                       std::span<const double> onsets);

}  // namespace chordgram

#endif  // CHORDGRAM_WEIGHTING_HPP
