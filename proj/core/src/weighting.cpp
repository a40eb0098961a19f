#include "chordgram/weighting.hpp"

#include <algorithm>
#include <cmath>

#include "chordgram/vlt.hpp"

namespace chordgram {

namespace {

void check_positive(std::span<const double> iois) {
  for (double x : iois)
    if (!(x > 0.0))
      throw Error("inter-onset intervals must be positive (got " +
                  std::to_string(x) + ")");
}

}  // namespace

double weight_proximity(std::span<const double> iois, double tau) {
  check_positive(iois);
  if (tau <= 0) throw Error("tau must be > 0");
  double span = 0.0;
  for (double x : iois) span += x;
  return std::exp(-span / tau);
}

double weight_periodicity(std::span<const double> iois) {
  check_positive(iois);
  if (iois.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(iois.begin(), iois.end());
  return *lo / *hi;
}

double weight_resonance(std::span<const double> iois, double p0,
                        double sigma) {
  check_positive(iois);
  if (p0 <= 0) throw Error("p0 must be > 0");
  if (sigma <= 0) throw Error("sigma must be > 0");
  if (iois.empty()) return 1.0;
  double exponent_sum = 0.0;
  for (double x : iois) {
    const double d = std::log2(x / p0);
    exponent_sum += d * d / (2.0 * sigma * sigma);
  }
  // Geometric mean of the per-IOI resonance values.
  return std::exp(-exponent_sum / static_cast<double>(iois.size()));
}

double instance_weight(const WeightScheme& scheme,
                       std::span<const double> onsets) {
  if (scheme.kind == WeightKind::kNone) return 1.0;
  double iois[NGramType::kMaxN];
  const std::size_t count = onsets.size() < 2 ? 0 : onsets.size() - 1;
  for (std::size_t i = 0; i < count; ++i) iois[i] = onsets[i + 1] - onsets[i];
  const std::span<const double> view(iois, count);
  switch (scheme.kind) {
    case WeightKind::kProximity:
      return weight_proximity(view, scheme.tau);
    case WeightKind::kPeriodicity:
      return weight_periodicity(view);
    case WeightKind::kResonance:
      return weight_resonance(view, scheme.p0, scheme.sigma);
    default:
      return 1.0;
  }
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::kNone: return "none";
    case WeightKind::kProximity: return "proximity";
    case WeightKind::kPeriodicity: return "periodicity";
    case WeightKind::kResonance: return "resonance";
  }
  return "none";
}

WeightKind parse_weight_kind(const std::string& text) {
  if (text == "none") return WeightKind::kNone;
  if (text == "proximity") return WeightKind::kProximity;
  if (text == "periodicity") return WeightKind::kPeriodicity;
  if (text == "resonance") return WeightKind::kResonance;
  throw Error("unknown weighting '" + text +
              "' (expected none|proximity|periodicity|resonance)");
}

}  // namespace chordgram
