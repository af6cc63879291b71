#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mmsev::signalmath {

struct StatSet {
  double mean = 0.0;
  double median = 0.0;       // midpoint average for even lengths
  double std = 0.0;          // population standard deviation
  double peak_to_rms = 0.0;  // max|x| / rms(x); 0/0 -> 0
};

// Orthonormal DCT-II: X_k = s_k * sum_t x_t * cos(pi*(2t+1)*k / (2n)),
// s_0 = sqrt(1/n), s_k = sqrt(2/n) for k >= 1. Energy preserving.
// The naive O(n^2) sum is the contract; sessions are short enough.
std::vector<double> dct2(std::span<const double> series);

// dct2, then the k coefficients of largest |value| (ties to the lower
// index), signed, ordered by descending |value|; zero-padded when n < k.
std::vector<double> top_k_dct(std::span<const double> series, std::size_t k);

// Low-order alternative: coefficients 0..k-1 in index order, zero-padded.
std::vector<double> first_k_dct(std::span<const double> series, std::size_t k);

// Regression delta d_t = sum_{j=1..N} j*(x_{t+j} - x_{t-j}) / (2*sum j^2)
// with replicate padding at both edges. Delta-delta = delta(delta(x)).
std::vector<double> delta(std::span<const double> series, std::size_t window);

StatSet stat_descriptors(std::span<const double> series);

}  // namespace mmsev::signalmath
