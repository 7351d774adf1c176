#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "raltsim/baseband.hpp"
#include "raltsim/fft.hpp"
#include "raltsim/propagation.hpp"
#include "raltsim/rng.hpp"
#include "raltsim/spectrum.hpp"
#include "raltsim/units.hpp"

namespace raltsim {

/// FMCW sawtooth chirp parameters plus the baseband acquisition settings.
/// The simulation runs on the dechirped (post-mixer) baseband, so the RF
/// sweep itself is never sampled; center/bandwidth matter for band checks
/// and filter attenuation of the echo path.
struct ChirpConfig {
  double center_frequency_hz = 4.3e9;
  double sweep_bandwidth_hz = 150e6;
  double sweep_period_s = 1e-3;
  double tx_power_dbm = 25.0;
  double baseband_sample_rate_hz = 2e6;
  std::size_t fft_length = 4096;
  /// Largest altitude the unit is expected to report; drives the Nyquist
  /// margin check on the beat frequency.
  double altitude_ceiling_m = 762.0;  // 2500 ft

  std::size_t sweep_sample_count() const {
    return static_cast<std::size_t>(
        std::llround(sweep_period_s * baseband_sample_rate_hz));
  }

  void validate(const FrequencyBand& ralt_band) const;

  bool operator==(const ChirpConfig&) const = default;
};

/// Single specular terrain return.
struct EchoChannel {
  double altitude_m = 0.0;
  double terrain_reflectivity_db = 10.0;  // loss applied to the echo
  bool echo_enabled = true;

  /// Round-trip spreading loss at the given carrier. The round-trip distance
  /// is clamped to 1 m so the h -> 0 degenerate case stays finite.
  double two_way_spreading_loss_db(double carrier_hz) const {
    return fspl(std::max(2.0 * altitude_m, 1.0), carrier_hz);
  }

  void validate() const {
    if (altitude_m < 0.0) {
      throw std::invalid_argument("EchoChannel: altitude must be >= 0");
    }
    if (terrain_reflectivity_db < 0.0) {
      throw std::invalid_argument("EchoChannel: reflectivity loss must be >= 0");
    }
  }

  bool operator==(const EchoChannel&) const = default;
};

struct ReceiverConfig {
  double noise_figure_db = 5.0;
  double thermal_noise_dbm_hz = -174.0;
  /// Out-of-band power at the LNA above which desensitization begins.
  double blocking_threshold_dbm = -30.0;
  /// Noise-floor rise per dB of excess blocker power.
  double desensitization_db_per_db = 1.0;
  double detection_snr_threshold_db = 13.0;
  /// Software gain offsetting the filter insertion loss.
  double gain_compensation_db = 0.0;

  void validate() const {
    if (desensitization_db_per_db < 0.0) {
      throw std::invalid_argument("ReceiverConfig: desensitization slope must be >= 0");
    }
    if (!(detection_snr_threshold_db > 0.0)) {
      throw std::invalid_argument("ReceiverConfig: detection SNR threshold must be > 0");
    }
  }

  bool operator==(const ReceiverConfig&) const = default;
};

enum class Validity { valid, no_computed_data };

inline const char* to_string(Validity v) {
  return v == Validity::valid ? "valid" : "no_computed_data";
}

struct AltimeterOutput {
  std::optional<double> altitude_m;  // absent when invalid
  double snr_db = -std::numeric_limits<double>::infinity();
  Validity validity = Validity::no_computed_data;
  std::size_t peak_bin = 0;
  double interpolated_offset = 0.0;  // fractional bin in [-0.5, 0.5]
};

inline void ChirpConfig::validate(const FrequencyBand& ralt_band) const {
  if (!(sweep_bandwidth_hz > 0.0) || !(sweep_period_s > 0.0) ||
      !(baseband_sample_rate_hz > 0.0) || !(center_frequency_hz > 0.0)) {
    throw ConfigError("ChirpConfig: frequencies and period must be positive");
  }
  const double f_lo = center_frequency_hz - 0.5 * sweep_bandwidth_hz;
  const double f_hi = center_frequency_hz + 0.5 * sweep_bandwidth_hz;
  if (f_lo < ralt_band.low_hz || f_hi > ralt_band.high_hz) {
    throw ConfigError("ChirpConfig: sweep must stay inside the altimeter band");
  }
  const double max_beat = 2.0 * sweep_bandwidth_hz * altitude_ceiling_m /
                          (speed_of_light_m_s * sweep_period_s);
  if (!(baseband_sample_rate_hz > 2.0 * max_beat)) {
    throw ConfigError(
        "ChirpConfig: sample rate must exceed twice the ceiling beat frequency");
  }
  if (!is_power_of_two(fft_length)) {
    throw ConfigError("ChirpConfig: fft_length must be a power of two");
  }
  if (fft_length < sweep_sample_count()) {
    throw ConfigError("ChirpConfig: fft_length must hold one full sweep");
  }
}

inline ChirpConfig default_chirp() { return ChirpConfig{}; }
inline ReceiverConfig default_receiver() { return ReceiverConfig{}; }

/// Closed-form beat frequency f_b = 2*B*h / (c*T) for a sawtooth FMCW sweep.
inline double beat_frequency_oracle(double altitude_m, const ChirpConfig& chirp) {
  if (altitude_m < 0.0) {
    throw std::domain_error("beat_frequency_oracle: altitude must be >= 0");
  }
  return 2.0 * chirp.sweep_bandwidth_hz * altitude_m /
         (speed_of_light_m_s * chirp.sweep_period_s);
}

/// Range resolution c / (2*B).
inline double altitude_resolution(const ChirpConfig& chirp) {
  if (!(chirp.sweep_bandwidth_hz > 0.0)) {
    throw std::domain_error("altitude_resolution: bandwidth must be positive");
  }
  return speed_of_light_m_s / (2.0 * chirp.sweep_bandwidth_hz);
}

/// One sweep of dechirped complex baseband. Contains the echo tone at the
/// oracle beat frequency with link-budget amplitude, white complex Gaussian
/// noise at the effective floor (thermal + NF + desensitization rise from the
/// injected blocker power), and the injected in-band interference components.
/// `filter` is the receiver bandpass mask, or nullptr for an unfiltered unit;
/// it attenuates the echo at the sweep center frequency.
///
/// All randomness is drawn from `seed` in a fixed order (echo phase, thermal
/// noise, per-component spread noise), so identical arguments give
/// bit-identical sequences.
inline std::vector<std::complex<double>> synthesize_dechirped(
    const ChirpConfig& chirp, const EchoChannel& channel, const ReceiverConfig& rx,
    const FilterSpec* filter, const BasebandInterference& injected,
    std::uint64_t seed) {
  channel.validate();
  rx.validate();
  const double beat_hz = beat_frequency_oracle(channel.altitude_m, chirp);
  if (!(chirp.baseband_sample_rate_hz > 2.0 * beat_hz)) {
    throw ConfigError("synthesize_dechirped: beat frequency violates Nyquist");
  }

  const std::size_t n = chirp.sweep_sample_count();
  if (n == 0) {
    throw ConfigError("synthesize_dechirped: sweep contains no samples");
  }
  std::vector<std::complex<double>> out(n, {0.0, 0.0});
  Rng rng(derive_stream(seed, 0x5157ULL));

  const double dt = 1.0 / chirp.baseband_sample_rate_hz;
  const double two_pi = 6.283185307179586476925286766559;

  // Echo tone from the link budget.
  const double echo_phase = rng.phase();
  if (channel.echo_enabled) {
    double echo_dbm = chirp.tx_power_dbm -
                      channel.two_way_spreading_loss_db(chirp.center_frequency_hz) -
                      channel.terrain_reflectivity_db + rx.gain_compensation_db;
    if (filter != nullptr) {
      echo_dbm -= filter_attenuation(*filter, chirp.center_frequency_hz);
    }
    const double amp = std::sqrt(dbm_to_mw(echo_dbm));
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = two_pi * beat_hz * (dt * static_cast<double>(i)) + echo_phase;
      out[i] += std::polar(amp, arg);
    }
  }

  // Effective noise floor: thermal density + noise figure + blocker rise.
  const double rise_db = injected.blocking_power_mw > 0.0
                             ? std::max(0.0, rx.desensitization_db_per_db *
                                                 (injected.blocking_power_dbm() -
                                                  rx.blocking_threshold_dbm))
                             : 0.0;
  const double noise_density_dbm_hz =
      rx.thermal_noise_dbm_hz + rx.noise_figure_db + rise_db;
  const double noise_variance_mw =
      dbm_to_mw(noise_density_dbm_hz) * chirp.baseband_sample_rate_hz;
  if (noise_variance_mw > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] += rng.complex_gaussian(noise_variance_mw);
    }
  }

  // Injected interference: coherent tones, then spread components.
  for (const InbandTone& tone : injected.tones) {
    const double amp = std::sqrt(dbm_to_mw(tone.power_dbm));
    if (!(amp > 0.0)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double arg =
          two_pi * tone.baseband_hz * (dt * static_cast<double>(i)) + tone.phase_rad;
      out[i] += std::polar(amp, arg);
    }
  }
  for (const InbandNoise& band : injected.noise) {
    const double variance = dbm_to_mw(band.power_dbm);
    if (!(variance > 0.0)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] += rng.complex_gaussian(variance);
    }
  }
  return out;
}

/// Spectral altitude estimator: Hann window, zero-pad to fft_length, pick the
/// strongest bin in [0, N/2] (ties go to the lower frequency, i.e. the lower
/// altitude), refine with three-point quadratic interpolation in log power,
/// and convert through h = c*T*f/(2B). SNR is peak power over the median bin
/// power of the searched range; below the detection threshold the output is
/// no-computed-data with no altitude.
inline AltimeterOutput estimate_altitude(std::span<const std::complex<double>> samples,
                                         const ChirpConfig& chirp,
                                         const ReceiverConfig& rx) {
  const std::size_t n = samples.size();
  if (n == 0 || n > chirp.fft_length) {
    throw std::invalid_argument(
        "estimate_altitude: sample count must be in [1, fft_length]");
  }
  if (!is_power_of_two(chirp.fft_length)) {
    throw std::invalid_argument("estimate_altitude: fft_length must be a power of two");
  }

  std::vector<std::complex<double>> buf(chirp.fft_length, {0.0, 0.0});
  const std::vector<double> window = hann_window(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = samples[i] * window[i];
  fft_inplace(buf);

  const std::size_t search_end = chirp.fft_length / 2;  // inclusive
  std::vector<double> power(search_end + 1);
  for (std::size_t k = 0; k <= search_end; ++k) power[k] = std::norm(buf[k]);

  std::size_t peak = 0;
  for (std::size_t k = 1; k <= search_end; ++k) {
    if (power[k] > power[peak]) peak = k;  // strict: ties keep the lower bin
  }

  std::vector<double> sorted = power;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double floor = sorted[sorted.size() / 2];

  AltimeterOutput result;
  result.peak_bin = peak;
  if (power[peak] <= 0.0) {
    return result;  // silent input: NCD, snr = -inf
  }
  result.snr_db = floor > 0.0 ? ratio_to_db(power[peak] / floor)
                              : std::numeric_limits<double>::infinity();

  double delta = 0.0;
  if (peak > 0 && peak < search_end && power[peak - 1] > 0.0 && power[peak + 1] > 0.0) {
    const double lm = std::log(power[peak - 1]);
    const double l0 = std::log(power[peak]);
    const double lp = std::log(power[peak + 1]);
    const double denom = lm - 2.0 * l0 + lp;
    if (denom < 0.0) {
      delta = std::clamp(0.5 * (lm - lp) / denom, -0.5, 0.5);
    }
  }
  result.interpolated_offset = delta;

  if (result.snr_db < rx.detection_snr_threshold_db) {
    return result;  // validity stays no_computed_data
  }

  const double bin_hz = chirp.baseband_sample_rate_hz / static_cast<double>(chirp.fft_length);
  const double f_peak = (static_cast<double>(peak) + delta) * bin_hz;
  const double altitude = speed_of_light_m_s * chirp.sweep_period_s * f_peak /
                          (2.0 * chirp.sweep_bandwidth_hz);
  result.altitude_m = std::max(0.0, altitude);
  result.validity = Validity::valid;
  return result;
}

}  // namespace raltsim
