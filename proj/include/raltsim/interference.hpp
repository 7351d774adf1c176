#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "raltsim/altimeter.hpp"
#include "raltsim/baseband.hpp"
#include "raltsim/propagation.hpp"
#include "raltsim/rng.hpp"
#include "raltsim/spectrum.hpp"
#include "raltsim/units.hpp"

namespace raltsim {

enum class InterfererClass { fundamental, spurious };

inline const char* to_string(InterfererClass c) {
  return c == InterfererClass::fundamental ? "fundamental" : "spurious";
}

struct GeometrySpec {
  enum class Kind { fixed_distance, ground_below };
  Kind kind = Kind::fixed_distance;
  double distance_m = 300.0;  // fixed_distance only

  bool operator==(const GeometrySpec&) const = default;
};

/// One spurious spectral line. `rf_hz` locates it for filter attenuation.
/// In coherent mode `baseband_hz` pins where the line lands after dechirp,
/// which is what makes deterministic false-altitude scenarios expressible;
/// in spread mode the line's energy is smeared across the whole baseband.
struct SpuriousTone {
  double rf_hz = 0.0;
  double eirp_dbm = 0.0;
  std::optional<double> baseband_hz;

  bool operator==(const SpuriousTone&) const = default;
};

enum class SpuriousInjection { spread, coherent };

struct SpuriousShape {
  enum class Kind { flat_noise_psd, tones };
  Kind kind = Kind::tones;
  // flat_noise_psd
  double psd_dbm_per_hz = -100.0;
  FrequencyBand support{4.2e9, 4.4e9};
  // tones
  std::vector<SpuriousTone> tones;
  SpuriousInjection injection = SpuriousInjection::spread;

  bool operator==(const SpuriousShape&) const = default;
};

/// A 5G emitter as seen by the altimeter. Fundamental emitters live outside
/// the altimeter band and threaten via front-end blocking; spurious emitters
/// put energy into the receiver's passband directly.
struct InterfererSpec {
  std::string name = "interferer";
  FrequencyBand emission_band{3.7e9, 3.98e9};
  InterfererClass cls = InterfererClass::fundamental;
  double eirp_dbm = 62.0;
  /// Linear EIRP multiplier (regional power variants); applied to both the
  /// fundamental EIRP and spurious component levels.
  double eirp_scale = 1.0;
  double duty_cycle = 1.0;  // TDD on-air fraction, average-power model
  GeometrySpec geometry{};
  std::optional<SpuriousShape> shape;  // spurious class only

  void validate(const FrequencyBand& ralt_band) const {
    emission_band.validate();
    if (!(duty_cycle > 0.0 && duty_cycle <= 1.0)) {
      throw std::invalid_argument("InterfererSpec '" + name +
                                  "': duty_cycle must be in (0, 1]");
    }
    if (!(eirp_scale > 0.0)) {
      throw std::invalid_argument("InterfererSpec '" + name +
                                  "': eirp_scale must be positive");
    }
    if (geometry.kind == GeometrySpec::Kind::fixed_distance &&
        !(geometry.distance_m > 0.0)) {
      throw std::invalid_argument("InterfererSpec '" + name +
                                  "': distance must be positive");
    }
    if (cls == InterfererClass::fundamental) {
      if (band_overlap(emission_band, ralt_band).has_value()) {
        throw std::invalid_argument(
            "InterfererSpec '" + name +
            "': fundamental emission band must be disjoint from the altimeter band");
      }
      return;
    }
    if (!shape.has_value()) {
      throw std::invalid_argument("InterfererSpec '" + name +
                                  "': spurious class requires a spurious_shape");
    }
    if (shape->kind == SpuriousShape::Kind::flat_noise_psd) {
      shape->support.validate();
      if (shape->support.low_hz < ralt_band.low_hz ||
          shape->support.high_hz > ralt_band.high_hz) {
        throw std::invalid_argument("InterfererSpec '" + name +
                                    "': spurious PSD support outside the altimeter band");
      }
    } else {
      if (shape->tones.empty()) {
        throw std::invalid_argument("InterfererSpec '" + name +
                                    "': spurious tone list is empty");
      }
      for (const SpuriousTone& tone : shape->tones) {
        if (!(tone.rf_hz > 0.0)) {
          throw std::invalid_argument("InterfererSpec '" + name +
                                      "': tone frequency must be positive");
        }
        if (shape->injection == SpuriousInjection::spread &&
            !ralt_band.contains(tone.rf_hz)) {
          // The spread model only makes sense for energy the sweep passes
          // through; coherent tones model receiver-generated false beats and
          // may originate anywhere the front end is exposed.
          throw std::invalid_argument(
              "InterfererSpec '" + name +
              "': spread-mode spurious tone outside the altimeter band");
        }
        if (shape->injection == SpuriousInjection::coherent &&
            !tone.baseband_hz.has_value()) {
          throw std::invalid_argument("InterfererSpec '" + name +
                                      "': coherent tone requires baseband_hz");
        }
      }
    }
  }

  bool operator==(const InterfererSpec&) const = default;
};

/// Distance between emitter and aircraft for the configured geometry.
inline double resolve_distance_m(const InterfererSpec& intf, double altitude_m) {
  if (intf.geometry.kind == GeometrySpec::Kind::fixed_distance) {
    return intf.geometry.distance_m;
  }
  if (!(altitude_m > 0.0)) {
    throw ConfigError("InterfererSpec '" + intf.name +
                      "': ground_below geometry is degenerate at zero altitude");
  }
  return altitude_m;
}

/// Power at the antenna before any filtering:
/// eirp + 10*log10(eirp_scale) - fspl + 10*log10(duty_cycle).
inline double received_power(const InterfererSpec& intf, double altitude_m,
                             const PropagationModel& prop) {
  const double d = resolve_distance_m(intf, altitude_m);
  const double carrier =
      prop.carrier_for_loss_hz.value_or(intf.emission_band.center_hz());
  return intf.eirp_dbm + ratio_to_db(intf.eirp_scale) - fspl(d, carrier) +
         ratio_to_db(intf.duty_cycle);
}

/// Piecewise-linear desensitization: no effect up to the blocking threshold,
/// then `slope` dB of noise-floor rise per dB of excess blocker power.
inline double blocking_degradation(double out_of_band_power_dbm,
                                   const ReceiverConfig& rx) {
  if (!(out_of_band_power_dbm > rx.blocking_threshold_dbm)) return 0.0;
  return rx.desensitization_db_per_db *
         (out_of_band_power_dbm - rx.blocking_threshold_dbm);
}

namespace detail {

inline double attenuation_or_zero(const FilterSpec* filter, double f_hz) {
  return filter != nullptr ? filter_attenuation(*filter, f_hz) : 0.0;
}

// Number of sub-segments a PSD support is integrated over. Each segment is
// attenuated at its own center so a support straddling a filter transition
// is handled piecewise.
inline constexpr int psd_segments = 16;

}  // namespace detail

/// Converts the interferer set into the baseband injection bundle for one
/// trial: spurious components are propagated, filter-attenuated at their RF
/// frequency, and emitted as coherent tones or spread noise; fundamental
/// emitters accumulate post-filter out-of-band blocking power. Class
/// separation is strict: fundamentals contribute no in-band components and
/// spurious emitters no blocking power.
inline BasebandInterference inband_injection(
    const std::vector<InterfererSpec>& interferers, const FilterSpec* filter,
    const ChirpConfig& chirp, double altitude_m, const PropagationModel& prop,
    std::uint64_t seed, const FrequencyBand& ralt_band = FrequencyBand{4.2e9, 4.4e9}) {
  (void)chirp;  // the spread model uses the full baseband analysis bandwidth
  BasebandInterference bundle;
  Rng rng(derive_stream(seed, 0x1A7FULL));

  for (const InterfererSpec& intf : interferers) {
    intf.validate(ralt_band);
    if (intf.cls == InterfererClass::fundamental) {
      const double p_dbm =
          received_power(intf, altitude_m, prop) -
          detail::attenuation_or_zero(filter, intf.emission_band.center_hz());
      bundle.blocking_power_mw += dbm_to_mw(p_dbm);
      continue;
    }

    const double d = resolve_distance_m(intf, altitude_m);
    const double carrier =
        prop.carrier_for_loss_hz.value_or(intf.emission_band.center_hz());
    const double path_db =
        fspl(d, carrier) - ratio_to_db(intf.duty_cycle) - ratio_to_db(intf.eirp_scale);

    const SpuriousShape& shape = *intf.shape;
    if (shape.kind == SpuriousShape::Kind::tones) {
      for (const SpuriousTone& tone : shape.tones) {
        const double p_dbm = tone.eirp_dbm - path_db -
                             detail::attenuation_or_zero(filter, tone.rf_hz);
        if (shape.injection == SpuriousInjection::coherent) {
          bundle.tones.push_back(InbandTone{*tone.baseband_hz, p_dbm, rng.phase()});
        } else {
          bundle.noise.push_back(InbandNoise{p_dbm});
        }
      }
    } else {
      const double seg_width = shape.support.width_hz() / detail::psd_segments;
      for (int s = 0; s < detail::psd_segments; ++s) {
        const double f_center = shape.support.low_hz + (s + 0.5) * seg_width;
        const double p_dbm = shape.psd_dbm_per_hz + ratio_to_db(seg_width) - path_db -
                             detail::attenuation_or_zero(filter, f_center);
        bundle.noise.push_back(InbandNoise{p_dbm});
      }
    }
  }
  return bundle;
}

}  // namespace raltsim
