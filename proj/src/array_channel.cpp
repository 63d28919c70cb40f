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

#include "beamsense/array_channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "beamsense/rng.hpp"

namespace beamsense {

namespace {

constexpr double kPi = std::numbers::pi;

// Normalized sinc: p(0) = 1, zeros at the other integer taps.
double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

void ArrayConfig::validate() const {
  if (num_elements < 1)
    throw ConfigError("num_elements must be >= 1, got " +
                      std::to_string(num_elements));
  if (!(element_spacing > 0.0) || element_spacing > 1.0)
    throw ConfigError("element_spacing must be in (0, 1] wavelengths");
  if (!(fov_gamma_deg > 0.0) || fov_gamma_deg > 180.0)
    throw ConfigError("fov_gamma_deg must be in (0, 180]");
}

void OfdmConfig::validate() const {
  if (num_subcarriers < 1) throw ConfigError("num_subcarriers must be >= 1");
  if (cyclic_prefix < 1) throw ConfigError("cyclic_prefix must be >= 1");
  if (!(sample_time_s > 0.0)) throw ConfigError("sample_time_s must be > 0");
}

Eigen::VectorXcd steering_vector(const ArrayConfig &array, double theta_rad,
                                 double phi_rad) {
  array.validate();
  const double spatial_freq =
      2.0 * kPi * array.element_spacing * std::cos(phi_rad) * std::sin(theta_rad);
  Eigen::VectorXcd a(array.num_elements);
  for (int m = 0; m < array.num_elements; ++m)
    a(m) = std::polar(1.0, spatial_freq * static_cast<double>(m));
  return a;
}

BeamCodebook generate_codebook(const ArrayConfig &array, int num_beams) {
  array.validate();
  if (num_beams < 1) throw ConfigError("codebook size must be >= 1");

  const double half_fov_rad = 0.5 * array.fov_gamma_deg * kPi / 180.0;
  const double sin_hi = std::sin(half_fov_rad);
  const double sin_lo = -sin_hi;

  BeamCodebook cb;
  cb.beams.resize(array.num_elements, num_beams);
  cb.steer_angles_deg.resize(num_beams);

  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(array.num_elements));
  for (int q = 0; q < num_beams; ++q) {
    const double s =
        num_beams == 1
            ? 0.5 * (sin_lo + sin_hi)
            : sin_lo + (sin_hi - sin_lo) * static_cast<double>(q) /
                           static_cast<double>(num_beams - 1);
    const double theta = std::asin(s);
    cb.beams.col(q) = steering_vector(array, theta, 0.0).conjugate() * inv_sqrt_m;
    cb.steer_angles_deg(q) = theta * 180.0 / kPi;
  }
  return cb;
}

ChannelMatrix build_channel(const std::vector<ChannelPath> &paths,
                            const ArrayConfig &array, const OfdmConfig &ofdm) {
  array.validate();
  ofdm.validate();

  const int num_taps = ofdm.cyclic_prefix;
  const int num_sub = ofdm.num_subcarriers;
  const double ts = ofdm.sample_time_s;
  const double max_delay = static_cast<double>(num_taps) * ts;

  for (const auto &path : paths) {
    if (path.delay_s < 0.0)
      throw DelayOutOfRange("negative path delay");
    if (path.delay_s >= max_delay)
      throw DelayOutOfRange("path delay " + std::to_string(path.delay_s) +
                            " s exceeds the cyclic-prefix window " +
                            std::to_string(max_delay) + " s");
  }

  ChannelMatrix channel;
  channel.entries = Eigen::MatrixXcd::Zero(num_sub, array.num_elements);

  for (const auto &path : paths) {
    // Delay in taps, snapped to the grid when within 1e-12 of it.
    double delay_taps = path.delay_s / ts;
    const double nearest = std::round(delay_taps);
    if (std::abs(delay_taps - nearest) < 1e-12) delay_taps = nearest;

    // Per-subcarrier scalar response of this path over the tap window.
    Eigen::VectorXcd response = Eigen::VectorXcd::Zero(num_sub);
    for (int d = 0; d < num_taps; ++d) {
      const double pulse = sinc(static_cast<double>(d) - delay_taps);
      if (pulse == 0.0) continue;
      const std::complex<double> tap = path.gain * pulse;
      for (int k = 0; k < num_sub; ++k) {
        const double angle = -2.0 * kPi * static_cast<double>(k) *
                             static_cast<double>(d) / static_cast<double>(num_sub);
        response(k) += tap * std::polar(1.0, angle);
      }
    }

    const Eigen::VectorXcd a =
        steering_vector(array, path.azimuth_rad, path.elevation_rad);
    channel.entries.noalias() += response * a.transpose();
  }
  return channel;
}

PowerVector received_power(const ChannelMatrix &channel,
                           const BeamCodebook &codebook, double noise_std,
                           std::uint64_t rng_seed) {
  if (channel.num_elements() != codebook.num_elements())
    throw DimensionMismatch("channel has " +
                            std::to_string(channel.num_elements()) +
                            " elements, codebook has " +
                            std::to_string(codebook.num_elements()));
  if (noise_std < 0.0) throw ConfigError("noise_std must be >= 0");

  const int num_sub = channel.num_subcarriers();
  PowerVector power;
  power.values.resize(codebook.num_beams());
  for (int q = 0; q < codebook.num_beams(); ++q) {
    const Eigen::VectorXcd projected = channel.entries * codebook.beams.col(q);
    power.values(q) = projected.squaredNorm() / static_cast<double>(num_sub);
  }

  power.noisy = noise_std > 0.0;
  if (power.noisy) {
    Rng rng(rng_seed);
    for (int q = 0; q < power.values.size(); ++q)
      power.values(q) = std::max(0.0, power.values(q) + rng.normal(0.0, noise_std));
  }
  return power;
}

int optimal_beam_rate(const ChannelMatrix &channel, const BeamCodebook &codebook,
                      double snr_linear) {
  if (channel.num_elements() != codebook.num_elements())
    throw DimensionMismatch("channel/codebook element counts differ");
  if (!(snr_linear > 0.0)) throw ConfigError("snr_linear must be > 0");

  const int num_sub = channel.num_subcarriers();
  int best = 0;
  double best_rate = -1.0;
  for (int q = 0; q < codebook.num_beams(); ++q) {
    const Eigen::VectorXcd projected = channel.entries * codebook.beams.col(q);
    double rate = 0.0;
    for (int k = 0; k < num_sub; ++k)
      rate += std::log2(1.0 + snr_linear * std::norm(projected(k)));
    rate /= static_cast<double>(num_sub);
    if (rate > best_rate) {
      best_rate = rate;
      best = q;
    }
  }
  return best;
}

int optimal_beam_power(const PowerVector &power) {
  if (power.values.size() == 0) throw EmptyVector("empty power vector");
  int best = 0;
  for (int q = 1; q < power.values.size(); ++q)
    if (power.values(q) > power.values(best)) best = q;
  return best;
}

PowerVector downsample_power(const PowerVector &p64) {
  if (p64.values.size() != 64)
    throw WrongLength("expected a 64-beam power vector, got " +
                      std::to_string(p64.values.size()));
  PowerVector out;
  out.noisy = p64.noisy;
  out.values.resize(32);
  for (int q = 0; q < 32; ++q) out.values(q) = p64.values(2 * q);
  return out;
}

}  // namespace beamsense
