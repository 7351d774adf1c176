#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "raltsim/units.hpp"

namespace raltsim {

/// A deterministic spectral line injected into the dechirped baseband.
struct InbandTone {
  double baseband_hz = 0.0;
  double power_dbm = -std::numeric_limits<double>::infinity();
  double phase_rad = 0.0;
};

/// Interference energy spread uniformly across the baseband analysis
/// bandwidth (the spread model for swept-through CW and noise-like spurs).
struct InbandNoise {
  double power_dbm = -std::numeric_limits<double>::infinity();
};

/// Output of the interference module, consumed by the baseband synthesizer:
/// in-band components (already propagated and filter-attenuated) plus the
/// accumulated out-of-band blocker power driving desensitization.
struct BasebandInterference {
  std::vector<InbandTone> tones;
  std::vector<InbandNoise> noise;
  double blocking_power_mw = 0.0;

  double blocking_power_dbm() const {
    return blocking_power_mw > 0.0 ? mw_to_dbm(blocking_power_mw)
                                   : -std::numeric_limits<double>::infinity();
  }

  bool empty() const {
    return tones.empty() && noise.empty() && blocking_power_mw == 0.0;
  }
};

}  // namespace raltsim
