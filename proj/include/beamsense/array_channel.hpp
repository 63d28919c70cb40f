// SPDX-License-Identifier: Apache-2.0
//
// beamsense - sensing-aided mmWave beam prediction simulator and learning pipeline
// Copyright (C) 2026 beamsense contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Wireless layer: ULA steering vectors, a beam-steering codebook laid out
// uniformly in sine space, the frequency-domain geometric channel, per-beam
// received power, and the two optimal-beam rules (rate sweep and its
// power approximation for single-path operation).

#ifndef BEAMSENSE_ARRAY_CHANNEL_HPP
#define BEAMSENSE_ARRAY_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "beamsense/errors.hpp"

namespace beamsense {

// Uniform linear array along the azimuth plane. Spacing is a multiple of
// the carrier wavelength; fov_gamma_deg is the azimuth span covered by the
// codebook, centered on boresight.
struct ArrayConfig {
  int num_elements = 32;
  double element_spacing = 0.5;
  double fov_gamma_deg = 90.0;

  void validate() const;
};

// OFDM numerology. The cyclic prefix bounds the supported channel delay
// spread: every path delay must stay below cyclic_prefix * sample_time_s.
struct OfdmConfig {
  int num_subcarriers = 64;
  int cyclic_prefix = 8;
  double sample_time_s = 1e-9;
  double snr_db = 20.0;
  double symbol_power = 1.0;

  void validate() const;
};

// One geometric propagation path. The gain includes the path loss.
struct ChannelPath {
  std::complex<double> gain{1.0, 0.0};
  double delay_s = 0.0;
  double azimuth_rad = 0.0;
  double elevation_rad = 0.0;
};

// Columns are the Q unit-norm beams of an M-element array, sorted by
// steering angle (degrees, strictly increasing).
struct BeamCodebook {
  Eigen::MatrixXcd beams;           // M x Q
  Eigen::VectorXd steer_angles_deg; // Q

  int num_elements() const { return static_cast<int>(beams.rows()); }
  int num_beams() const { return static_cast<int>(beams.cols()); }
};

// Frequency-domain channel; row k is the length-M channel at subcarrier k.
struct ChannelMatrix {
  Eigen::MatrixXcd entries; // K x M

  int num_subcarriers() const { return static_cast<int>(entries.rows()); }
  int num_elements() const { return static_cast<int>(entries.cols()); }
};

// Per-beam received power, optionally perturbed by measurement noise.
struct PowerVector {
  Eigen::VectorXd values;
  bool noisy = false;

  int size() const { return static_cast<int>(values.size()); }
};

// Array response for a plane wave from (theta, phi):
// entry m = exp(j 2*pi*spacing*m*cos(phi)*sin(theta)), m = 0..M-1.
Eigen::VectorXcd steering_vector(const ArrayConfig &array, double theta_rad,
                                 double phi_rad);

// Q conjugate-steered unit-norm beams at angles uniformly spaced in
// sin(theta) over [-gamma/2, +gamma/2]. Q = 1 yields the boresight beam.
BeamCodebook generate_codebook(const ArrayConfig &array, int num_beams);

// Geometric channel: h_k = sum_d sum_l gain_l e^{-j 2 pi k d / K}
// p(d*T_s - tau_l) a(theta_l, phi_l), with p a normalized sinc truncated to
// the cyclic-prefix window and delays snapped to the tap grid when within
// 1e-12 of it. Throws DelayOutOfRange if a delay reaches D*T_s.
ChannelMatrix build_channel(const std::vector<ChannelPath> &paths,
                            const ArrayConfig &array, const OfdmConfig &ofdm);

// Subcarrier-averaged |h_k^T f_q|^2 per beam. When noise_std > 0, adds
// Gaussian measurement noise (clamped at zero) and marks the vector noisy.
PowerVector received_power(const ChannelMatrix &channel,
                           const BeamCodebook &codebook, double noise_std,
                           std::uint64_t rng_seed);

// Beam sweep under the achievable-rate objective
// argmax_q (1/K) sum_k log2(1 + snr |h_k^T f_q|^2); ties -> lowest index.
int optimal_beam_rate(const ChannelMatrix &channel,
                      const BeamCodebook &codebook, double snr_linear);

// Power-maximizing beam; the single-path approximation of the rate sweep.
// Ties -> lowest index.
int optimal_beam_power(const PowerVector &power);

// Keeps the even-indexed entries of a 64-beam measurement, halving an
// oversampled codebook without shrinking its angular coverage.
PowerVector downsample_power(const PowerVector &p64);

}  // namespace beamsense

#endif  // BEAMSENSE_ARRAY_CHANNEL_HPP
