#include "mmsev/audiofeat.hpp"

#include <array>

#include "mmsev/signalmath.hpp"

namespace mmsev::audiofeat {

namespace sm = signalmath;

void AudioConfig::validate() const {
  if (dct_k == 0) fail(Errc::invalid_config, "dct_k must be >= 1");
  if (delta_window == 0) fail(Errc::invalid_config, "delta_window must be >= 1");
  if (!stream_base) fail(Errc::invalid_config, "base stream cannot be disabled");
}

std::size_t AudioConfig::feature_count(std::size_t descriptor_count) const {
  std::size_t per_descriptor = 0;
  const std::array<std::pair<bool, bool>, 3> streams = {
      std::pair{stream_base, stats_base},
      std::pair{stream_delta, stats_delta},
      std::pair{stream_delta_delta, stats_delta_delta},
  };
  for (const auto& [enabled, stats] : streams)
    if (enabled) per_descriptor += dct_k + (stats ? 4 : 0);
  return descriptor_count * per_descriptor;
}

namespace {

void emit_stream(const std::string& descriptor, const char* stream,
                 const std::vector<double>& values, bool with_stats,
                 const AudioConfig& config, FeatureVector& out) {
  const std::vector<double> coeffs =
      config.dct_selection == DctSelection::largest_magnitude
          ? sm::top_k_dct(values, config.dct_k)
          : sm::first_k_dct(values, config.dct_k);
  const std::string prefix = descriptor + "." + stream + ".";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out.names.push_back(prefix + "dct" + std::to_string(i));
    out.values.push_back(coeffs[i]);
  }
  if (with_stats) {
    const sm::StatSet s = sm::stat_descriptors(values);
    out.names.push_back(prefix + "mean");
    out.values.push_back(s.mean);
    out.names.push_back(prefix + "median");
    out.values.push_back(s.median);
    out.names.push_back(prefix + "std");
    out.values.push_back(s.std);
    out.names.push_back(prefix + "peak_rms");
    out.values.push_back(s.peak_to_rms);
  }
}

}  // namespace

FeatureVector extract_audio_features(const DescriptorSeries& series,
                                     const AudioConfig& config,
                                     std::string session_id) {
  config.validate();
  if (series.frame_count() == 0)
    fail(Errc::empty_input, "descriptor series has no frames");
  if (series.descriptor_count() == 0)
    fail(Errc::empty_input, "descriptor series has no descriptors");

  std::vector<std::size_t> kept_frames;
  if (config.voiced_only) {
    const auto vuv = series.column_index("VUV");
    if (!vuv)
      fail(Errc::invalid_config, "voiced_only requires a VUV descriptor column");
    for (std::size_t f = 0; f < series.frame_count(); ++f)
      if (series.frames[f][*vuv] != 0.0) kept_frames.push_back(f);
    if (kept_frames.empty())
      fail(Errc::empty_input, "voiced_only filtering removed every frame");
  }

  FeatureVector out;
  out.session_id = std::move(session_id);
  out.modality = Modality::audio;
  out.names.reserve(config.feature_count(series.descriptor_count()));
  out.values.reserve(out.names.capacity());

  for (std::size_t d = 0; d < series.descriptor_count(); ++d) {
    std::vector<double> base;
    if (config.voiced_only) {
      base.reserve(kept_frames.size());
      for (std::size_t f : kept_frames) base.push_back(series.frames[f][d]);
    } else {
      base = series.column(d);
    }
    const std::string& name = series.descriptor_names[d];

    emit_stream(name, "base", base, config.stats_base, config, out);
    if (config.stream_delta || config.stream_delta_delta) {
      const std::vector<double> d1 = sm::delta(base, config.delta_window);
      if (config.stream_delta)
        emit_stream(name, "delta", d1, config.stats_delta, config, out);
      if (config.stream_delta_delta) {
        const std::vector<double> d2 = sm::delta(d1, config.delta_window);
        emit_stream(name, "deltadelta", d2, config.stats_delta_delta, config, out);
      }
    }
  }

  out.validate();
  return out;
}

}  // namespace mmsev::audiofeat
