#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "raltsim/units.hpp"

namespace raltsim {

/// Free-space path loss in dB: 20*log10(4*pi*d*f/c).
inline double fspl(double distance_m, double f_hz) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("fspl: distance must be positive");
  }
  if (!(f_hz > 0.0)) {
    throw std::domain_error("fspl: frequency must be positive");
  }
  const double four_pi = 12.566370614359172953850573533118;
  return 20.0 * std::log10(four_pi * distance_m * f_hz / speed_of_light_m_s);
}

struct PropagationModel {
  enum class Kind { free_space };
  Kind model = Kind::free_space;
  /// Carrier used for the loss computation; when unset, the emitter's band
  /// center is used.
  std::optional<double> carrier_for_loss_hz;

  bool operator==(const PropagationModel&) const = default;
};

}  // namespace raltsim
