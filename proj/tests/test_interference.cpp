#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "raltsim/interference.hpp"

using namespace raltsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const FrequencyBand kRalt{4.2e9, 4.4e9};

InterfererSpec fundamental_at(double distance_m, double eirp_dbm = 60.0) {
  InterfererSpec spec;
  spec.name = "tower";
  spec.cls = InterfererClass::fundamental;
  spec.emission_band = {3.7e9, 3.98e9};
  spec.eirp_dbm = eirp_dbm;
  spec.geometry = {GeometrySpec::Kind::fixed_distance, distance_m};
  return spec;
}

InterfererSpec spurious_tone(double rf_hz, double eirp_dbm, double baseband_hz,
                             double distance_m = 300.0) {
  InterfererSpec spec;
  spec.name = "spur";
  spec.cls = InterfererClass::spurious;
  spec.emission_band = {3.7e9, 3.98e9};
  spec.geometry = {GeometrySpec::Kind::fixed_distance, distance_m};
  SpuriousShape shape;
  shape.kind = SpuriousShape::Kind::tones;
  shape.injection = SpuriousInjection::coherent;
  shape.tones = {{rf_hz, eirp_dbm, baseband_hz}};
  spec.shape = shape;
  return spec;
}

}  // namespace

TEST_CASE("fspl closed form") {
  // Hand value: 20*log10(4*pi*300*3.8e9 / 2.99792458e8).
  CHECK_THAT(fspl(300.0, 3.8e9), WithinRel(93.58588024861282, 1e-9));
  // Doubling the distance adds exactly 20*log10(2).
  CHECK_THAT(fspl(600.0, 3.8e9) - fspl(300.0, 3.8e9),
             WithinAbs(6.020599913279624, 1e-9));
  // Unit argument of the log: d = c/(4*pi), f = 1 Hz.
  const double d0 = speed_of_light_m_s / (4.0 * std::acos(-1.0));
  CHECK_THAT(fspl(d0, 1.0), WithinAbs(0.0, 1e-9));
  CHECK_THROWS_AS(fspl(0.0, 1e9), std::domain_error);
  CHECK_THROWS_AS(fspl(100.0, 0.0), std::domain_error);
}

TEST_CASE("received power budget") {
  PropagationModel prop;
  prop.carrier_for_loss_hz = 3.8e9;
  InterfererSpec spec = fundamental_at(300.0, 60.0);
  CHECK_THAT(received_power(spec, 100.0, prop), WithinAbs(-33.585880248612824, 1e-9));

  InterfererSpec half_duty = spec;
  half_duty.duty_cycle = 0.5;
  CHECK_THAT(received_power(spec, 100.0, prop) - received_power(half_duty, 100.0, prop),
             WithinAbs(3.010299956639812, 1e-9));

  // Regional power multiplier: 1.5x is +10*log10(1.5).
  InterfererSpec scaled = spec;
  scaled.eirp_scale = 1.5;
  CHECK_THAT(received_power(scaled, 100.0, prop) - received_power(spec, 100.0, prop),
             WithinAbs(1.7609125905568124, 1e-9));
}

TEST_CASE("ground_below geometry follows the aircraft") {
  PropagationModel prop;
  InterfererSpec spec = fundamental_at(1.0);
  spec.geometry.kind = GeometrySpec::Kind::ground_below;
  const double high = received_power(spec, 500.0, prop);
  const double low = received_power(spec, 50.0, prop);
  CHECK(high < low);
  CHECK_THROWS_AS(received_power(spec, 0.0, prop), ConfigError);
}

TEST_CASE("blocking degradation is piecewise linear") {
  ReceiverConfig rx;  // threshold -30 dBm, slope 1.0
  CHECK(blocking_degradation(rx.blocking_threshold_dbm - 10.0, rx) == 0.0);
  CHECK(blocking_degradation(rx.blocking_threshold_dbm, rx) == 0.0);
  CHECK_THAT(blocking_degradation(rx.blocking_threshold_dbm + 6.0, rx), WithinAbs(6.0, 1e-12));

  ReceiverConfig steep = rx;
  steep.desensitization_db_per_db = 2.0;
  CHECK_THAT(blocking_degradation(rx.blocking_threshold_dbm + 6.0, steep), WithinAbs(12.0, 1e-12));
}

TEST_CASE("empty interferer list yields an empty bundle") {
  const ChirpConfig chirp = default_chirp();
  const auto bundle = inband_injection({}, nullptr, chirp, 100.0, {}, 1, kRalt);
  CHECK(bundle.empty());
  CHECK(bundle.blocking_power_dbm() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("filter cuts fundamental blocking power by the stopband attenuation") {
  const ChirpConfig chirp = default_chirp();
  const FilterSpec filter = default_filter();
  InterfererSpec blocker = fundamental_at(300.0);
  blocker.emission_band = {3.85e9, 3.95e9};  // center 3.9 GHz, inside the stopband

  const auto without = inband_injection({blocker}, nullptr, chirp, 100.0, {}, 1, kRalt);
  const auto with = inband_injection({blocker}, &filter, chirp, 100.0, {}, 1, kRalt);
  CHECK_THAT(without.blocking_power_dbm() - with.blocking_power_dbm(),
             WithinAbs(filter_attenuation(filter, 3.9e9), 1e-9));
  CHECK_THAT(without.blocking_power_dbm() - with.blocking_power_dbm(), WithinAbs(40.0, 1e-9));
}

TEST_CASE("mid-passband spurious tone pays only the insertion loss") {
  const ChirpConfig chirp = default_chirp();
  const FilterSpec filter = default_filter();
  InterfererSpec spur = spurious_tone(4.3e9, 30.0, 50e3);

  const auto without = inband_injection({spur}, nullptr, chirp, 100.0, {}, 1, kRalt);
  const auto with = inband_injection({spur}, &filter, chirp, 100.0, {}, 1, kRalt);
  REQUIRE(without.tones.size() == 1);
  REQUIRE(with.tones.size() == 1);
  CHECK_THAT(without.tones[0].power_dbm - with.tones[0].power_dbm,
             WithinAbs(filter.insertion_loss_db, 1e-9));
}

TEST_CASE("filter-off equals an all-zero filter mask") {
  const ChirpConfig chirp = default_chirp();
  FilterSpec unity = default_filter();
  unity.stopband_attenuation_db = 0.0;
  unity.passband_ripple_db = 0.0;
  unity.insertion_loss_db = 0.0;

  std::vector<InterfererSpec> intfs = {fundamental_at(250.0),
                                       spurious_tone(4.25e9, 20.0, 80e3)};
  const auto off = inband_injection(intfs, nullptr, chirp, 120.0, {}, 3, kRalt);
  const auto unity_mask = inband_injection(intfs, &unity, chirp, 120.0, {}, 3, kRalt);
  REQUIRE(off.tones.size() == unity_mask.tones.size());
  CHECK_THAT(off.blocking_power_dbm(), WithinAbs(unity_mask.blocking_power_dbm(), 1e-12));
  for (std::size_t i = 0; i < off.tones.size(); ++i) {
    CHECK(off.tones[i].power_dbm == unity_mask.tones[i].power_dbm);
    CHECK(off.tones[i].baseband_hz == unity_mask.tones[i].baseband_hz);
    CHECK(off.tones[i].phase_rad == unity_mask.tones[i].phase_rad);
  }
}

TEST_CASE("class separation is exact") {
  const ChirpConfig chirp = default_chirp();
  const FilterSpec filter = default_filter();

  const auto fund = inband_injection({fundamental_at(300.0)}, &filter, chirp, 100.0, {}, 1, kRalt);
  CHECK(fund.tones.empty());
  CHECK(fund.noise.empty());
  CHECK(fund.blocking_power_mw > 0.0);

  const auto spur =
      inband_injection({spurious_tone(4.3e9, 30.0, 50e3)}, &filter, chirp, 100.0, {}, 1, kRalt);
  CHECK(spur.blocking_power_mw == 0.0);
  CHECK(spur.tones.size() == 1);
}

TEST_CASE("power accounting matches per-component link budgets") {
  const ChirpConfig chirp = default_chirp();
  const FilterSpec filter = default_filter();
  PropagationModel prop;

  InterfererSpec psd_spur;
  psd_spur.name = "psd";
  psd_spur.cls = InterfererClass::spurious;
  psd_spur.emission_band = {3.7e9, 3.98e9};
  psd_spur.geometry = {GeometrySpec::Kind::fixed_distance, 400.0};
  psd_spur.duty_cycle = 0.8;
  SpuriousShape shape;
  shape.kind = SpuriousShape::Kind::flat_noise_psd;
  shape.psd_dbm_per_hz = -80.0;
  shape.support = {4.25e9, 4.35e9};
  psd_spur.shape = shape;

  InterfererSpec tone = spurious_tone(4.31e9, 25.0, 60e3, 500.0);

  const auto bundle = inband_injection({psd_spur, tone}, &filter, chirp, 90.0, prop, 2, kRalt);

  // Independent expectation: sum of received component powers minus the
  // filter attenuation at each component's RF position.
  double expected_mw = 0.0;
  const double carrier_psd = psd_spur.emission_band.center_hz();
  const double seg_w = shape.support.width_hz() / 16.0;
  for (int s = 0; s < 16; ++s) {
    const double f = shape.support.low_hz + (s + 0.5) * seg_w;
    const double p = shape.psd_dbm_per_hz + 10.0 * std::log10(seg_w) -
                     fspl(400.0, carrier_psd) + 10.0 * std::log10(0.8) -
                     filter_attenuation(filter, f);
    expected_mw += dbm_to_mw(p);
  }
  const double tone_p = 25.0 - fspl(500.0, tone.emission_band.center_hz()) -
                        filter_attenuation(filter, 4.31e9);
  expected_mw += dbm_to_mw(tone_p);

  double got_mw = 0.0;
  for (const auto& t : bundle.tones) got_mw += dbm_to_mw(t.power_dbm);
  for (const auto& n : bundle.noise) got_mw += dbm_to_mw(n.power_dbm);
  CHECK_THAT(ratio_to_db(got_mw / expected_mw), WithinAbs(0.0, 0.01));
}

TEST_CASE("raising EIRP never lowers any injected power") {
  const ChirpConfig chirp = default_chirp();
  const FilterSpec filter = default_filter();
  double prev_block = -1.0;
  double prev_tone = -1e9;
  bool first = true;
  for (double bump : {0.0, 3.0, 10.0, 25.0}) {
    InterfererSpec blocker = fundamental_at(300.0, 60.0 + bump);
    InterfererSpec spur = spurious_tone(4.3e9, 20.0 + bump, 50e3);
    const auto bundle =
        inband_injection({blocker, spur}, &filter, chirp, 100.0, {}, 1, kRalt);
    REQUIRE(bundle.tones.size() == 1);
    if (!first) {
      CHECK(bundle.blocking_power_mw >= prev_block);
      CHECK(bundle.tones[0].power_dbm >= prev_tone);
    }
    first = false;
    prev_block = bundle.blocking_power_mw;
    prev_tone = bundle.tones[0].power_dbm;
  }
}

TEST_CASE("interferer invariants are enforced") {
  const ChirpConfig chirp = default_chirp();

  // Fundamental band overlapping the altimeter band.
  InterfererSpec bad_fund = fundamental_at(300.0);
  bad_fund.emission_band = {4.1e9, 4.3e9};
  CHECK_THROWS_AS(inband_injection({bad_fund}, nullptr, chirp, 100.0, {}, 1, kRalt),
                  std::invalid_argument);

  // Spurious without a shape.
  InterfererSpec no_shape;
  no_shape.cls = InterfererClass::spurious;
  CHECK_THROWS_AS(inband_injection({no_shape}, nullptr, chirp, 100.0, {}, 1, kRalt),
                  std::invalid_argument);

  // Duty cycle outside (0, 1].
  InterfererSpec idle = fundamental_at(300.0);
  idle.duty_cycle = 0.0;
  CHECK_THROWS_AS(idle.validate(kRalt), std::invalid_argument);
  idle.duty_cycle = 1.5;
  CHECK_THROWS_AS(idle.validate(kRalt), std::invalid_argument);

  // Spread-mode spurious tone outside the altimeter band.
  InterfererSpec out_of_band = spurious_tone(3.9e9, 20.0, 50e3);
  out_of_band.shape->injection = SpuriousInjection::spread;
  out_of_band.shape->tones[0].baseband_hz.reset();
  CHECK_THROWS_AS(inband_injection({out_of_band}, nullptr, chirp, 100.0, {}, 1, kRalt),
                  std::invalid_argument);

  // PSD support outside the altimeter band.
  InterfererSpec bad_psd;
  bad_psd.cls = InterfererClass::spurious;
  SpuriousShape shape;
  shape.kind = SpuriousShape::Kind::flat_noise_psd;
  shape.psd_dbm_per_hz = -90.0;
  shape.support = {4.35e9, 4.45e9};  // spills past 4.4 GHz
  bad_psd.shape = shape;
  CHECK_THROWS_AS(inband_injection({bad_psd}, nullptr, chirp, 100.0, {}, 1, kRalt),
                  std::invalid_argument);

  // Coherent tone missing its baseband mapping.
  InterfererSpec no_map = spurious_tone(3.9e9, 20.0, 50e3);
  no_map.shape->tones[0].baseband_hz.reset();
  CHECK_THROWS_AS(inband_injection({no_map}, nullptr, chirp, 100.0, {}, 1, kRalt),
                  std::invalid_argument);
}

TEST_CASE("clean bundle leaves the synthesizer output untouched") {
  const ChirpConfig chirp = default_chirp();
  const ReceiverConfig rx = default_receiver();
  EchoChannel channel{80.0, 10.0};
  const auto baseline = synthesize_dechirped(chirp, channel, rx, nullptr, {}, 21);
  const auto empty_bundle =
      inband_injection({}, nullptr, chirp, 80.0, {}, 21, kRalt);
  const auto with_empty = synthesize_dechirped(chirp, channel, rx, nullptr, empty_bundle, 21);
  CHECK(baseline == with_empty);
}
