#pragma once

#include <cstddef>
#include <string>

#include "mmsev/types.hpp"

namespace mmsev::audiofeat {

enum class DctSelection { largest_magnitude, first_k };

struct AudioConfig {
  std::size_t dct_k = 10;
  std::size_t delta_window = 2;
  // Streams derived from each descriptor column. Base must stay enabled.
  bool stream_base = true;
  bool stream_delta = true;
  bool stream_delta_delta = true;
  // Which streams also get the 4 statistical descriptors.
  bool stats_base = true;
  bool stats_delta = true;
  bool stats_delta_delta = true;
  DctSelection dct_selection = DctSelection::largest_magnitude;
  // Drop frames whose VUV descriptor is 0 before any computation.
  bool voiced_only = false;

  void validate() const;
  // Closed form: D * sum over enabled streams of (dct_k + 4*[stats_on]).
  std::size_t feature_count(std::size_t descriptor_count) const;
};

// One feature block per descriptor column: top-k DCT coefficients and
// statistical descriptors over the base / delta / delta-delta streams.
// Names follow "<descriptor>.<stream>.<kind>"; order is (descriptor,
// stream, kind) and is identical for every session.
FeatureVector extract_audio_features(const DescriptorSeries& series,
                                     const AudioConfig& config,
                                     std::string session_id = {});

}  // namespace mmsev::audiofeat
