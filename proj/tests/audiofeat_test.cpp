#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmsev/audiofeat.hpp"
#include "mmsev/ingest.hpp"
#include "mmsev/rng.hpp"
#include "test_support.hpp"

using namespace mmsev;
using audiofeat::AudioConfig;
using audiofeat::extract_audio_features;

namespace {

DescriptorSeries make_series(std::vector<std::string> names,
                             std::size_t n_frames, SplitMix64& rng) {
  DescriptorSeries s;
  s.descriptor_names = std::move(names);
  s.frames.resize(n_frames);
  for (auto& row : s.frames)
    row = testsup::random_vector(rng, s.descriptor_names.size(), -4.0, 4.0);
  return s;
}

}  // namespace

TEST_CASE("default config on the 74-column layout yields 3108 features") {
  SplitMix64 rng{11};
  auto s = make_series(ingest::ColumnMap::covarep74_names(), 30, rng);
  const AudioConfig config;
  CHECK(config.feature_count(74) == 3108);

  const FeatureVector fv = extract_audio_features(s, config, "s1");
  CHECK(fv.names.size() == 3108);
  CHECK(fv.values.size() == 3108);
  CHECK(fv.session_id == "s1");
  CHECK(fv.modality == Modality::audio);
}

TEST_CASE("base-only single descriptor yields 14 named features") {
  SplitMix64 rng{12};
  auto s = make_series({"F0"}, 16, rng);
  AudioConfig config;
  config.stream_delta = false;
  config.stream_delta_delta = false;
  CHECK(config.feature_count(1) == 14);

  const FeatureVector fv = extract_audio_features(s, config);
  const std::vector<std::string> expected = {
      "F0.base.dct0", "F0.base.dct1", "F0.base.dct2", "F0.base.dct3",
      "F0.base.dct4", "F0.base.dct5", "F0.base.dct6", "F0.base.dct7",
      "F0.base.dct8", "F0.base.dct9", "F0.base.mean", "F0.base.median",
      "F0.base.std",  "F0.base.peak_rms"};
  CHECK(fv.names == expected);
}

TEST_CASE("constant descriptor column propagates through the streams") {
  DescriptorSeries s;
  s.descriptor_names = {"NAQ"};
  s.frames.assign(16, {5.0});

  const FeatureVector fv = extract_audio_features(s, AudioConfig{});
  const auto m = testsup::feature_map(fv);

  // Orthonormal DCT of a constant: coefficient 0 carries everything.
  CHECK(m.at("NAQ.base.dct0") == doctest::Approx(5.0 * std::sqrt(16.0)).epsilon(1e-12));
  // The higher cosine sums cancel only up to rounding.
  for (int i = 1; i < 10; ++i)
    CHECK(std::abs(m.at("NAQ.base.dct" + std::to_string(i))) <= 1e-12);
  CHECK(m.at("NAQ.base.mean") == 5.0);
  CHECK(m.at("NAQ.base.median") == 5.0);
  CHECK(m.at("NAQ.base.std") == 0.0);
  CHECK(m.at("NAQ.base.peak_rms") == 1.0);

  for (const char* stream : {"delta", "deltadelta"}) {
    for (int i = 0; i < 10; ++i)
      CHECK(m.at("NAQ." + std::string(stream) + ".dct" + std::to_string(i)) == 0.0);
    CHECK(m.at("NAQ." + std::string(stream) + ".std") == 0.0);
    CHECK(m.at("NAQ." + std::string(stream) + ".mean") == 0.0);
    // All-zero stream: peak over rms is 0/0, defined as 0.
    CHECK(m.at("NAQ." + std::string(stream) + ".peak_rms") == 0.0);
  }
}

TEST_CASE("feature count matches the closed form over random configs") {
  SplitMix64 rng{13};
  for (int trial = 0; trial < 25; ++trial) {
    AudioConfig config;
    config.dct_k = 1 + rng.next_below(12);
    config.delta_window = 1 + rng.next_below(3);
    config.stream_delta = rng.next_below(2) == 1;
    config.stream_delta_delta = rng.next_below(2) == 1;
    config.stats_base = rng.next_below(2) == 1;
    config.stats_delta = rng.next_below(2) == 1;
    config.stats_delta_delta = rng.next_below(2) == 1;
    config.dct_selection = rng.next_below(2) == 1
                               ? audiofeat::DctSelection::largest_magnitude
                               : audiofeat::DctSelection::first_k;

    std::vector<std::string> names;
    const std::size_t d = 1 + rng.next_below(8);
    for (std::size_t i = 0; i < d; ++i) names.push_back("d" + std::to_string(i));
    auto s = make_series(names, 5 + rng.next_below(36), rng);

    const FeatureVector fv = extract_audio_features(s, config);
    CHECK(fv.names.size() == config.feature_count(d));
    const std::set<std::string> unique(fv.names.begin(), fv.names.end());
    CHECK(unique.size() == fv.names.size());
  }
}

TEST_CASE("voiced_only drops unvoiced frames before any computation") {
  DescriptorSeries full;
  full.descriptor_names = {"F0", "VUV"};
  const std::vector<double> voiced_f0 = {110, 114, 118, 111, 116, 112};
  std::size_t vi = 0;
  for (int f = 0; f < 9; ++f) {
    const bool voiced = f % 3 != 2;
    // Unvoiced frames carry a poison value that must never leak through.
    full.frames.push_back(voiced ? std::vector<double>{voiced_f0[vi++], 1.0}
                                 : std::vector<double>{9999.0, 0.0});
  }
  REQUIRE(vi == voiced_f0.size());

  DescriptorSeries filtered;
  filtered.descriptor_names = full.descriptor_names;
  for (const auto& row : full.frames)
    if (row[1] != 0.0) filtered.frames.push_back(row);

  AudioConfig voiced_config;
  voiced_config.voiced_only = true;
  const FeatureVector a = extract_audio_features(full, voiced_config);
  const FeatureVector b = extract_audio_features(filtered, AudioConfig{});
  CHECK(a.names == b.names);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("voiced_only without a VUV column is a config error") {
  SplitMix64 rng{14};
  auto s = make_series({"F0", "NAQ"}, 8, rng);
  AudioConfig config;
  config.voiced_only = true;
  testsup::expect_error(Errc::invalid_config,
                        [&] { extract_audio_features(s, config); });
}

TEST_CASE("voiced_only rejects a series with no voiced frames") {
  DescriptorSeries s;
  s.descriptor_names = {"F0", "VUV"};
  s.frames.assign(6, {120.0, 0.0});
  AudioConfig config;
  config.voiced_only = true;
  testsup::expect_error(Errc::empty_input,
                        [&] { extract_audio_features(s, config); });
}

TEST_CASE("extraction is deterministic across repeated calls") {
  SplitMix64 rng{15};
  auto s = make_series(ingest::ColumnMap::covarep74_names(), 40, rng);
  const FeatureVector a = extract_audio_features(s, AudioConfig{});
  const FeatureVector b = extract_audio_features(s, AudioConfig{});
  CHECK(a.names == b.names);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("scaling a column scales DCT features and keeps peak_to_rms") {
  SplitMix64 rng{16};
  auto s = make_series({"Rd"}, 24, rng);
  const double alpha = 3.5;
  DescriptorSeries scaled = s;
  for (auto& row : scaled.frames) row[0] *= alpha;

  const auto base = testsup::feature_map(extract_audio_features(s, AudioConfig{}));
  const auto big = testsup::feature_map(extract_audio_features(scaled, AudioConfig{}));
  for (const auto& [name, value] : base) {
    if (name.find(".dct") != std::string::npos) {
      CHECK(big.at(name) == doctest::Approx(alpha * value).epsilon(1e-12));
    } else if (name.find(".peak_rms") != std::string::npos) {
      CHECK(big.at(name) == doctest::Approx(value).epsilon(1e-12));
    }
  }
}

TEST_CASE("config invariants are enforced") {
  SplitMix64 rng{17};
  auto s = make_series({"F0"}, 8, rng);

  AudioConfig no_base;
  no_base.stream_base = false;
  testsup::expect_error(Errc::invalid_config,
                        [&] { extract_audio_features(s, no_base); });

  AudioConfig zero_k;
  zero_k.dct_k = 0;
  testsup::expect_error(Errc::invalid_config,
                        [&] { extract_audio_features(s, zero_k); });

  DescriptorSeries empty;
  empty.descriptor_names = {"F0"};
  testsup::expect_error(Errc::empty_input,
                        [&] { extract_audio_features(empty, AudioConfig{}); });
}
