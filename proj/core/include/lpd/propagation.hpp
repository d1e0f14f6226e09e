/*
   Copyright 2026 The lpdsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lpd/nr_phy.hpp"
#include "lpd/rng.hpp"

namespace lpd::prop {

using cd = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Single hexagonal cell (flat-top orientation) with the gNB at the origin.
struct CellGeometry {
    double isd_m = 200.0;
    int sector_count = 3;
    double sector_width_deg = 120.0;
    double gnb_height_m = 10.0;
    double ue_height_m = 1.5;
    double min_d2d_m = 10.0;

    double circumradius_m() const;
    bool contains(Vec2 p) const;
    /// floor(azimuth / sector width) with azimuth in [0, 360).
    int sector_of(Vec2 p) const;
    double boresight_deg(int sector) const;
};

struct UpaConfig {
    int rows = 1;
    int cols = 1;
    int polarizations = 1;
    double spacing_wl = 0.5;

    int element_count() const { return rows * cols * polarizations; }
    static UpaConfig gnb() { return {4, 2, 2, 0.5}; }
    static UpaConfig ue() { return {2, 1, 2, 0.5}; }
};

struct LinkState {
    double d2d_m = 0.0;
    double d3d_m = 0.0;
    /// Azimuth of the receiver seen from the gNB, degrees in [0, 360).
    double azimuth_deg = 0.0;
    /// Elevation of the receiver seen from the gNB (negative = below).
    double elevation_deg = 0.0;
    bool los = false;
    double pathloss_db = 0.0;
    double shadowing_db = 0.0;

    double large_scale_gain_db() const { return -(pathloss_db + shadowing_db); }
};

struct Drop {
    Vec2 ue_pos;
    Vec2 eve_pos;
    int ue_sector = 0;
    int eve_sector = 0;
    LinkState ue_link;
    LinkState eve_link;
};

enum class Link { GnbToUe, GnbToEve };

double los_probability(double d2d_m);
/// UMi street-canyon pathloss (pre-breakpoint LOS branch).
double pathloss_umi(double d3d_m, double fc_ghz, bool los, double h_ue_m = 1.5);
double shadowing_sigma_db(bool los);

Vec2 sample_hexagon(Rng& rng, const CellGeometry& geometry);
LinkState make_link(Rng& rng, const CellGeometry& geometry, Vec2 pos, double fc_ghz);
Drop sample_drop(Rng& rng, const CellGeometry& geometry, double fc_ghz = 3.5);

/// Unit-norm planar-array response. Element order: polarization-major, then
/// row, then column; identical across polarizations.
std::vector<cd> steering_vector(const UpaConfig& array, double az_deg, double el_deg);

struct Beam {
    std::vector<cd> weights;
    double az_deg = 0.0;  ///< local to the sector panel
    double el_deg = 0.0;
    int beam_id = 0;      ///< global index sector * P + local beam
    int sector = 0;
};

/// P = 8 beams per sector: 2 azimuth x 4 elevation DFT directions.
std::vector<Beam> dft_codebook(const UpaConfig& array, const CellGeometry& geometry,
                               int beams_per_sector = 8);

/// Sector-panel element power gain in dBi (3-sector macro pattern, 8 dBi peak).
double element_gain_dbi(double az_local_deg, double el_deg);

struct ChannelModelConfig {
    int cluster_count = 6;
    double ricean_k_db = 9.0;
    double delay_spread_ns = 100.0;
    double az_spread_deg = 15.0;
    double el_spread_deg = 5.0;
    bool element_pattern = true;
};

struct Cluster {
    double delay_s = 0.0;
    int delay_samples = 0;
    double aod_deg = 0.0;  ///< global azimuth of departure at the gNB
    double zod_deg = 90.0;
    double aoa_deg = 0.0;
    double zoa_deg = 90.0;
    cd gain;               ///< small-scale amplitude
    bool dominant = false;
};

/// Clustered link between the 3-panel gNB and a receive array. Per-element
/// responses are precomputed; the object is immutable after construction.
class ChannelRealization {
public:
    ChannelRealization() = default;
    ChannelRealization(std::vector<Cluster> clusters, double large_scale_gain_db,
                       const UpaConfig& tx, const UpaConfig& rx, const CellGeometry& geometry,
                       bool element_pattern);

    const std::vector<Cluster>& clusters() const { return clusters_; }
    double large_scale_gain_db() const { return large_scale_gain_db_; }
    int rx_count() const { return rx_count_; }
    int tx_count() const { return tx_count_; }
    int max_delay_samples() const;

    /// Complex gain between tx element i of a sector panel and rx element j
    /// for one cluster (small-scale only).
    cd element_pair_gain(int sector, int cluster, int tx_element, int rx_element) const;
    /// w^H a_tx for one cluster.
    cd beam_coupling(const Beam& beam, int cluster) const;
    /// gain * a_rx[rx_element] * w^H a_tx: the tap weight of one cluster.
    cd path_coefficient(const Beam& beam, int cluster, int rx_element) const;
    /// Small-scale beam-coupled frequency response at FFT bin `bin` (signed,
    /// relative to DC) for one rx element.
    cd frequency_response(const Beam& beam, int rx_element, int bin, int fft_size) const;
    /// Large-scale gain x mean over rx elements and bins of |H|^2 (linear).
    double mean_gain(const Beam& beam, std::span<const int> bins, int fft_size) const;
    double total_small_scale_power() const;

private:
    std::vector<Cluster> clusters_;
    double large_scale_gain_db_ = 0.0;
    int tx_count_ = 0;
    int rx_count_ = 0;
    // [sector][cluster][tx element]
    std::vector<std::vector<std::vector<cd>>> tx_response_;
    // [cluster][rx element]
    std::vector<std::vector<cd>> rx_response_;
};

ChannelRealization gen_channel(Rng& rng, const LinkState& link, const UpaConfig& tx_array,
                               const UpaConfig& rx_array, const CellGeometry& geometry,
                               const nr::OfdmParams& ofdm, const ChannelModelConfig& model = {});

/// Convenience overload selecting the link from a drop.
ChannelRealization gen_channel(Rng& rng, const Drop& drop, const UpaConfig& tx_array,
                               const UpaConfig& rx_array, Link link,
                               const CellGeometry& geometry, const nr::OfdmParams& ofdm,
                               const ChannelModelConfig& model = {});

/// Tapped-delay-line channel: returns one waveform per rx element with the
/// same length and start time as the input.
std::vector<nr::Waveform> apply_channel(const nr::Waveform& tx, const ChannelRealization& channel,
                                        const Beam& beam, double large_scale_gain_db);

/// Adds the beam-coupled, delayed copies of `segment` (scaled by `amplitude`)
/// into per-element receive buffers starting at sample `start`. Samples past
/// the end of the buffers are dropped.
template <typename T>
void accumulate_channel(std::span<const cd> segment, long start, const ChannelRealization& channel,
                        const Beam& beam, double amplitude,
                        std::span<std::vector<std::complex<T>>> rx);

/// Thermal noise power in dBm over a bandwidth for a given noise figure.
double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db);
/// Adds complex Gaussian noise with total power noise_power_dbm per sample.
void add_noise(Rng& rng, nr::Waveform& wf, double noise_power_dbm);

}  // namespace lpd::prop
