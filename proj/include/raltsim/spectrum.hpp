#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "raltsim/units.hpp"

namespace raltsim {

/// Closed frequency interval [low_hz, high_hz], both strictly positive.
struct FrequencyBand {
  double low_hz = 0.0;
  double high_hz = 0.0;

  double center_hz() const { return 0.5 * (low_hz + high_hz); }
  double width_hz() const { return high_hz - low_hz; }
  bool contains(double f_hz) const { return f_hz >= low_hz && f_hz <= high_hz; }

  void validate() const {
    if (!(low_hz > 0.0) || !(high_hz > 0.0)) {
      throw std::invalid_argument("FrequencyBand: edges must be strictly positive");
    }
    if (!(low_hz < high_hz)) {
      throw std::invalid_argument("FrequencyBand: low must be below high");
    }
  }

  bool operator==(const FrequencyBand&) const = default;
};

/// Signed spectral margin between a victim band and an interferer band.
/// Positive: clear separation in Hz. Negative: the bands overlap by that
/// much. Symmetric in its arguments.
inline double guard_band(const FrequencyBand& victim, const FrequencyBand& interferer) {
  victim.validate();
  interferer.validate();
  const double below = victim.low_hz - interferer.high_hz;   // interferer under victim
  const double above = interferer.low_hz - victim.high_hz;   // interferer over victim
  return std::max(below, above);
}

/// Interval intersection; nullopt when the interiors are disjoint.
inline std::optional<FrequencyBand> band_overlap(const FrequencyBand& a,
                                                 const FrequencyBand& b) {
  a.validate();
  b.validate();
  const double lo = std::max(a.low_hz, b.low_hz);
  const double hi = std::min(a.high_hz, b.high_hz);
  if (lo >= hi) return std::nullopt;
  return FrequencyBand{lo, hi};
}

struct TransitionShape {
  enum class Kind { linear_db, polynomial_db };
  Kind kind = Kind::linear_db;
  int order = 1;  // polynomial_db only; linear_db behaves as order 1

  bool operator==(const TransitionShape&) const = default;
};

/// Parametric bandpass power mask: a passband bracketed by two stopbands and
/// monotone dB transitions between them. This is an analytic frequency-domain
/// mask, not a filter realization; attenuation values are positive dB meant
/// to be subtracted from signal power.
struct FilterSpec {
  FrequencyBand passband{4.0e9, 4.6e9};
  double lower_stopband_edge_hz = 3.98e9;
  double upper_stopband_edge_hz = 4.8e9;
  double stopband_attenuation_db = 40.0;
  double passband_ripple_db = 0.5;
  double insertion_loss_db = 1.5;
  TransitionShape transition{};

  void validate() const {
    passband.validate();
    if (!(lower_stopband_edge_hz > 0.0) ||
        !(lower_stopband_edge_hz < passband.low_hz) ||
        !(passband.high_hz < upper_stopband_edge_hz)) {
      throw std::invalid_argument(
          "FilterSpec: require lower_stopband_edge < passband.low < passband.high "
          "< upper_stopband_edge");
    }
    if (stopband_attenuation_db < 0.0 || insertion_loss_db < 0.0 ||
        passband_ripple_db < 0.0) {
      throw std::invalid_argument("FilterSpec: dB parameters must be non-negative");
    }
    if (transition.kind == TransitionShape::Kind::polynomial_db && transition.order < 1) {
      throw std::invalid_argument("FilterSpec: polynomial transition order must be >= 1");
    }
  }

  bool operator==(const FilterSpec&) const = default;
};

namespace detail {

// Monotone 0 -> 1 blend over t in [0, 1]; order 1 is the linear-in-dB ramp.
inline double transition_blend(const TransitionShape& shape, double t) {
  const int order = shape.kind == TransitionShape::Kind::linear_db ? 1 : shape.order;
  return std::pow(t, static_cast<double>(order));
}

}  // namespace detail

/// Mask attenuation in dB at frequency f. Passband: insertion loss plus a
/// deterministic one-cycle ripple term bounded by +/- passband_ripple (zero
/// at both edges and at band center). Stopbands: the configured floor.
/// Transitions: monotone interpolation in dB.
inline double filter_attenuation(const FilterSpec& filter, double f_hz) {
  if (!(f_hz > 0.0)) {
    throw std::domain_error("filter_attenuation: frequency must be positive");
  }
  filter.validate();

  const double il = filter.insertion_loss_db;
  const double sa = filter.stopband_attenuation_db;

  if (f_hz <= filter.lower_stopband_edge_hz || f_hz >= filter.upper_stopband_edge_hz) {
    return sa;
  }
  if (filter.passband.contains(f_hz)) {
    const double x = (f_hz - filter.passband.low_hz) / filter.passband.width_hz();
    const double ripple =
        filter.passband_ripple_db * std::sin(6.283185307179586476925286766559 * x);
    return std::max(0.0, il + ripple);
  }
  if (f_hz < filter.passband.low_hz) {
    const double t = (f_hz - filter.lower_stopband_edge_hz) /
                     (filter.passband.low_hz - filter.lower_stopband_edge_hz);
    return sa + (il - sa) * detail::transition_blend(filter.transition, t);
  }
  const double t = (filter.upper_stopband_edge_hz - f_hz) /
                   (filter.upper_stopband_edge_hz - filter.passband.high_hz);
  return sa + (il - sa) * detail::transition_blend(filter.transition, t);
}

/// Named registry of frequency allocations used across the simulator.
struct BandPlan {
  std::map<std::string, FrequencyBand> entries;

  const FrequencyBand& at(const std::string& name) const {
    auto it = entries.find(name);
    if (it == entries.end()) {
      throw std::invalid_argument("BandPlan: unknown band '" + name + "'");
    }
    return it->second;
  }

  const FrequencyBand& ralt() const { return at("ralt"); }
  const FrequencyBand& us_5g() const { return at("us_5g"); }
  const FrequencyBand& eu_5g() const { return at("eu_5g"); }

  void validate() const {
    for (const auto& [name, band] : entries) {
      try {
        band.validate();
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("BandPlan entry '" + name + "': " + e.what());
      }
    }
    at("ralt");
  }

  bool operator==(const BandPlan&) const = default;
};

inline BandPlan default_band_plan() {
  BandPlan plan;
  plan.entries["ralt"] = FrequencyBand{4.2e9, 4.4e9};
  plan.entries["us_5g"] = FrequencyBand{3.7e9, 3.98e9};
  plan.entries["eu_5g"] = FrequencyBand{3.4e9, 3.8e9};
  plan.entries["filter_passband"] = FrequencyBand{4.0e9, 4.6e9};
  return plan;
}

/// Stopband rejection and ripple defaults are placeholders; only the band
/// edges are fixed by the deployment context. See README.
inline FilterSpec default_filter() { return FilterSpec{}; }

}  // namespace raltsim
