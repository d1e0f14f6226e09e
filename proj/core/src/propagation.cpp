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

#include "lpd/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lpd::prop {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap180(double deg) {
    double a = std::fmod(deg + 180.0, 360.0);
    if (a < 0) a += 360.0;
    return a - 180.0;
}

double wrap360(double deg) {
    double a = std::fmod(deg, 360.0);
    return a < 0 ? a + 360.0 : a;
}

// Phasors of a planar array for spatial frequencies (u_h, u_v); see steering_vector.
std::vector<cd> array_phasors(const UpaConfig& array, double u_h, double u_v) {
    std::vector<cd> v;
    v.reserve(array.element_count());
    for (int p = 0; p < array.polarizations; ++p)
        for (int n = 0; n < array.rows; ++n)
            for (int m = 0; m < array.cols; ++m)
                v.push_back(std::polar(1.0, 2.0 * std::numbers::pi * array.spacing_wl *
                                                (m * u_h + n * u_v)));
    return v;
}

}  // namespace

double CellGeometry::circumradius_m() const { return isd_m / std::numbers::sqrt3; }

bool CellGeometry::contains(Vec2 p) const {
    const double r = circumradius_m();
    const double ax = std::abs(p.x), ay = std::abs(p.y);
    return ay <= std::numbers::sqrt3 / 2.0 * r &&
           std::numbers::sqrt3 * ax + ay <= std::numbers::sqrt3 * r;
}

int CellGeometry::sector_of(Vec2 p) const {
    const double az = wrap360(std::atan2(p.y, p.x) / kDeg);
    return std::min(sector_count - 1, static_cast<int>(az / sector_width_deg));
}

double CellGeometry::boresight_deg(int sector) const {
    return sector_width_deg * sector + sector_width_deg / 2.0;
}

double los_probability(double d2d_m) {
    if (d2d_m < 0) throw std::domain_error("negative distance");
    if (d2d_m <= 18.0) return 1.0;
    return 18.0 / d2d_m + std::exp(-d2d_m / 36.0) * (1.0 - 18.0 / d2d_m);
}

double pathloss_umi(double d3d_m, double fc_ghz, bool los, double h_ue_m) {
    const double pl_los = 32.4 + 21.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz);
    if (los) return pl_los;
    const double pl_nlos = 35.3 * std::log10(d3d_m) + 22.4 + 21.3 * std::log10(fc_ghz) -
                           0.3 * (h_ue_m - 1.5);
    return std::max(pl_los, pl_nlos);
}

double shadowing_sigma_db(bool los) { return los ? 4.0 : 7.82; }

Vec2 sample_hexagon(Rng& rng, const CellGeometry& g) {
    const double r = g.circumradius_m();
    const double h = std::numbers::sqrt3 / 2.0 * r;
    for (;;) {
        const Vec2 p{rng.uniform(-r, r), rng.uniform(-h, h)};
        if (g.contains(p) && std::hypot(p.x, p.y) >= g.min_d2d_m) return p;
    }
}

LinkState make_link(Rng& rng, const CellGeometry& g, Vec2 pos, double fc_ghz) {
    LinkState l;
    l.d2d_m = std::hypot(pos.x, pos.y);
    const double dh = g.gnb_height_m - g.ue_height_m;
    l.d3d_m = std::hypot(l.d2d_m, dh);
    l.azimuth_deg = wrap360(std::atan2(pos.y, pos.x) / kDeg);
    l.elevation_deg = -std::atan2(dh, l.d2d_m) / kDeg;
    l.los = rng.uniform() < los_probability(l.d2d_m);
    l.pathloss_db = pathloss_umi(l.d3d_m, fc_ghz, l.los, g.ue_height_m);
    l.shadowing_db = shadowing_sigma_db(l.los) * rng.normal();
    return l;
}

Drop sample_drop(Rng& rng, const CellGeometry& g, double fc_ghz) {
    Drop d;
    d.ue_pos = sample_hexagon(rng, g);
    d.eve_pos = sample_hexagon(rng, g);
    d.ue_sector = g.sector_of(d.ue_pos);
    d.eve_sector = g.sector_of(d.eve_pos);
    d.ue_link = make_link(rng, g, d.ue_pos, fc_ghz);
    d.eve_link = make_link(rng, g, d.eve_pos, fc_ghz);
    return d;
}

std::vector<cd> steering_vector(const UpaConfig& array, double az_deg, double el_deg) {
    auto v = array_phasors(array, std::sin(az_deg * kDeg) * std::cos(el_deg * kDeg),
                           std::sin(el_deg * kDeg));
    const double s = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (auto& x : v) x *= s;
    return v;
}

std::vector<Beam> dft_codebook(const UpaConfig& array, const CellGeometry& geometry,
                               int beams_per_sector) {
    if (array.cols != 2 || beams_per_sector != 2 * array.rows)
        throw std::domain_error("codebook expects a 2-column panel and 2 x rows beams per sector");
    // Horizontal: orthogonal 2-point DFT, u_h = -1/2, +1/2.
    // Vertical: 2x-oversampled DFT over the lower half space,
    // u_v = -(2e+1)/(2 rows), since every receiver sits below the panel.
    std::vector<Beam> beams;
    for (int s = 0; s < geometry.sector_count; ++s) {
        for (int a = 0; a < 2; ++a) {
            for (int e = 0; e < array.rows; ++e) {
                const double u_h = a == 0 ? -0.5 : 0.5;
                const double u_v = -(2.0 * e + 1.0) / (2.0 * array.rows);
                Beam b;
                b.weights = array_phasors(array, u_h, u_v);
                const double norm = 1.0 / std::sqrt(static_cast<double>(b.weights.size()));
                for (auto& w : b.weights) w *= norm;
                b.el_deg = std::asin(u_v) / kDeg;
                b.az_deg =
                    std::asin(std::clamp(u_h / std::cos(b.el_deg * kDeg), -1.0, 1.0)) / kDeg;
                b.sector = s;
                b.beam_id = s * beams_per_sector + a * array.rows + e;
                beams.push_back(std::move(b));
            }
        }
    }
    return beams;
}

double element_gain_dbi(double az_local_deg, double el_deg) {
    const double theta = 90.0 - el_deg;
    const double a_v = -std::min(12.0 * std::pow((theta - 90.0) / 65.0, 2), 30.0);
    const double a_h = -std::min(12.0 * std::pow(wrap180(az_local_deg) / 65.0, 2), 30.0);
    return 8.0 - std::min(-(a_v + a_h), 30.0);
}

ChannelRealization::ChannelRealization(std::vector<Cluster> clusters, double large_scale_gain_db,
                                       const UpaConfig& tx, const UpaConfig& rx,
                                       const CellGeometry& geometry, bool element_pattern)
    : clusters_(std::move(clusters)),
      large_scale_gain_db_(large_scale_gain_db),
      tx_count_(tx.element_count()),
      rx_count_(rx.element_count()) {
    const double sqrt_n = std::sqrt(static_cast<double>(tx_count_));
    tx_response_.resize(geometry.sector_count);
    for (int s = 0; s < geometry.sector_count; ++s) {
        for (const auto& c : clusters_) {
            const double az_local = wrap180(c.aod_deg - geometry.boresight_deg(s));
            const double el = 90.0 - c.zod_deg;
            const double g =
                element_pattern ? std::pow(10.0, element_gain_dbi(az_local, el) / 20.0) : 1.0;
            auto a = steering_vector(tx, az_local, el);
            for (auto& x : a) x *= sqrt_n * g;
            tx_response_[s].push_back(std::move(a));
        }
    }
    const double sqrt_m = std::sqrt(static_cast<double>(rx_count_));
    for (const auto& c : clusters_) {
        auto a = steering_vector(rx, c.aoa_deg, 90.0 - c.zoa_deg);
        for (auto& x : a) x *= sqrt_m;
        rx_response_.push_back(std::move(a));
    }
}

int ChannelRealization::max_delay_samples() const {
    int m = 0;
    for (const auto& c : clusters_) m = std::max(m, c.delay_samples);
    return m;
}

cd ChannelRealization::element_pair_gain(int sector, int cluster, int tx_element,
                                         int rx_element) const {
    return clusters_[cluster].gain * tx_response_[sector][cluster][tx_element] *
           rx_response_[cluster][rx_element];
}

cd ChannelRealization::beam_coupling(const Beam& beam, int cluster) const {
    const auto& a = tx_response_[beam.sector][cluster];
    cd acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(beam.weights[i]) * a[i];
    return acc;
}

cd ChannelRealization::path_coefficient(const Beam& beam, int cluster, int rx_element) const {
    return clusters_[cluster].gain * rx_response_[cluster][rx_element] *
           beam_coupling(beam, cluster);
}

cd ChannelRealization::frequency_response(const Beam& beam, int rx_element, int bin,
                                          int fft_size) const {
    cd h{};
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
        const double phase = -2.0 * std::numbers::pi * bin * clusters_[c].delay_samples / fft_size;
        h += path_coefficient(beam, static_cast<int>(c), rx_element) * std::polar(1.0, phase);
    }
    return h;
}

double ChannelRealization::mean_gain(const Beam& beam, std::span<const int> bins,
                                     int fft_size) const {
    double acc = 0.0;
    for (int j = 0; j < rx_count_; ++j) {
        std::vector<cd> taps(clusters_.size());
        for (std::size_t c = 0; c < clusters_.size(); ++c)
            taps[c] = path_coefficient(beam, static_cast<int>(c), j);
        for (int bin : bins) {
            cd h{};
            for (std::size_t c = 0; c < clusters_.size(); ++c)
                h += taps[c] * std::polar(1.0, -2.0 * std::numbers::pi * bin *
                                                   clusters_[c].delay_samples / fft_size);
            acc += std::norm(h);
        }
    }
    return std::pow(10.0, large_scale_gain_db_ / 10.0) * acc /
           (static_cast<double>(rx_count_) * bins.size());
}

double ChannelRealization::total_small_scale_power() const {
    double p = 0.0;
    for (const auto& c : clusters_) p += std::norm(c.gain);
    return p;
}

ChannelRealization gen_channel(Rng& rng, const LinkState& link, const UpaConfig& tx_array,
                               const UpaConfig& rx_array, const CellGeometry& geometry,
                               const nr::OfdmParams& ofdm, const ChannelModelConfig& model) {
    const double fs = ofdm.sample_rate_hz();
    const double zod_geo = 90.0 - link.elevation_deg;
    const double aoa_geo = wrap360(link.azimuth_deg + 180.0);
    const double zoa_geo = 90.0 + link.elevation_deg;
    const double k_lin = std::pow(10.0, model.ricean_k_db / 10.0);

    std::vector<Cluster> clusters;
    int scattered = model.cluster_count;
    double scattered_power = 1.0;
    if (link.los) {
        Cluster c;
        c.dominant = true;
        c.aod_deg = link.azimuth_deg;
        c.zod_deg = zod_geo;
        c.aoa_deg = aoa_geo;
        c.zoa_deg = zoa_geo;
        c.gain = std::polar(std::sqrt(k_lin / (k_lin + 1.0)), 2.0 * std::numbers::pi * rng.uniform());
        clusters.push_back(c);
        scattered -= 1;
        scattered_power = 1.0 / (k_lin + 1.0);
    }
    for (int i = 0; i < scattered; ++i) {
        Cluster c;
        c.delay_s = rng.exponential(model.delay_spread_ns * 1e-9);
        c.aod_deg = wrap360(link.azimuth_deg + rng.laplacian(model.az_spread_deg));
        c.zod_deg = std::clamp(zod_geo + rng.laplacian(model.el_spread_deg), 0.0, 180.0);
        c.aoa_deg = wrap360(aoa_geo + rng.laplacian(model.az_spread_deg));
        c.zoa_deg = std::clamp(zoa_geo + rng.laplacian(model.el_spread_deg), 0.0, 180.0);
        c.gain = rng.complex_normal(scattered_power / scattered);
        clusters.push_back(c);
    }
    if (!link.los) {
        // First arrival defines the time origin.
        double first = clusters.front().delay_s;
        for (const auto& c : clusters) first = std::min(first, c.delay_s);
        for (auto& c : clusters) c.delay_s -= first;
    }
    const double max_delay = (ofdm.cp_samples - 1) / fs;
    for (auto& c : clusters) {
        c.delay_s = std::min(c.delay_s, max_delay);
        c.delay_samples = static_cast<int>(std::lround(c.delay_s * fs));
    }
    return ChannelRealization(std::move(clusters), link.large_scale_gain_db(), tx_array, rx_array,
                              geometry, model.element_pattern);
}

ChannelRealization gen_channel(Rng& rng, const Drop& drop, const UpaConfig& tx_array,
                               const UpaConfig& rx_array, Link link, const CellGeometry& geometry,
                               const nr::OfdmParams& ofdm, const ChannelModelConfig& model) {
    return gen_channel(rng, link == Link::GnbToUe ? drop.ue_link : drop.eve_link, tx_array,
                       rx_array, geometry, ofdm, model);
}

template <typename T>
void accumulate_channel(std::span<const cd> segment, long start, const ChannelRealization& channel,
                        const Beam& beam, double amplitude,
                        std::span<std::vector<std::complex<T>>> rx) {
    const auto& clusters = channel.clusters();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const long offset = start + clusters[c].delay_samples;
        for (std::size_t j = 0; j < rx.size(); ++j) {
            const cd coef =
                amplitude * channel.path_coefficient(beam, static_cast<int>(c), static_cast<int>(j));
            if (coef == cd{}) continue;
            auto& buf = rx[j];
            const long len = static_cast<long>(buf.size());
            const long n0 = std::max(0L, -offset);
            const long n1 = std::min(static_cast<long>(segment.size()), len - offset);
            for (long n = n0; n < n1; ++n) {
                const cd v = coef * segment[n];
                buf[offset + n] += std::complex<T>(static_cast<T>(v.real()), static_cast<T>(v.imag()));
            }
        }
    }
}

template void accumulate_channel<float>(std::span<const cd>, long, const ChannelRealization&,
                                        const Beam&, double,
                                        std::span<std::vector<std::complex<float>>>);
template void accumulate_channel<double>(std::span<const cd>, long, const ChannelRealization&,
                                         const Beam&, double,
                                         std::span<std::vector<std::complex<double>>>);

std::vector<nr::Waveform> apply_channel(const nr::Waveform& tx, const ChannelRealization& channel,
                                        const Beam& beam, double large_scale_gain_db) {
    std::vector<std::vector<cd>> rx(channel.rx_count(), std::vector<cd>(tx.samples.size()));
    if (std::isfinite(large_scale_gain_db)) {
        accumulate_channel<double>(tx.samples, 0, channel, beam,
                                   std::pow(10.0, large_scale_gain_db / 20.0), rx);
    }
    std::vector<nr::Waveform> out;
    for (auto& r : rx) out.push_back({std::move(r), tx.sample_rate_hz, tx.start_time_s});
    return out;
}

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db) {
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

void add_noise(Rng& rng, nr::Waveform& wf, double noise_power_dbm) {
    const double var = std::pow(10.0, noise_power_dbm / 10.0);
    for (auto& s : wf.samples) s += rng.complex_normal(var);
}

}  // namespace lpd::prop
