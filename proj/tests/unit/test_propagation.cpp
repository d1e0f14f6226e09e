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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "lpd/propagation.hpp"
#include "oracle.hpp"

namespace {

using namespace lpd::prop;
using lpd::Rng;

constexpr double kDeg = std::numbers::pi / 180.0;

ChannelRealization single_ray(double az_deg, double el_deg, double gain_db = 0.0,
                              bool element_pattern = false) {
    Cluster c;
    c.dominant = true;
    c.aod_deg = az_deg;
    c.zod_deg = 90.0 - el_deg;
    c.aoa_deg = az_deg + 180.0;
    c.zoa_deg = 90.0 + el_deg;
    c.gain = 1.0;
    return ChannelRealization({c}, gain_db, UpaConfig::gnb(), UpaConfig::ue(), CellGeometry{},
                              element_pattern);
}

double norm2(const std::vector<cd>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s;
}

TEST(LosProbability, ReferenceValues) {
    EXPECT_DOUBLE_EQ(los_probability(10.0), 1.0);
    EXPECT_DOUBLE_EQ(los_probability(18.0), 1.0);
    EXPECT_NEAR(los_probability(100.0), 0.18 + std::exp(-100.0 / 36.0) * 0.82, 1e-12);
    EXPECT_NEAR(los_probability(100.0), 0.2312, 5e-4);
    EXPECT_THROW(los_probability(-1.0), std::domain_error);
}

TEST(LosProbability, DecreasesWithDistance) {
    double prev = 1.0;
    for (double d = 18.0; d < 500.0; d += 1.0) {
        const double p = los_probability(d);
        EXPECT_LE(p, prev + 1e-15);
        EXPECT_GE(p, 0.0);
        prev = p;
    }
}

TEST(Pathloss, ReferenceValues) {
    EXPECT_NEAR(pathloss_umi(100.0, 3.5, true), 85.28, 0.005);
    EXPECT_NEAR(pathloss_umi(1.0, 1.0, true), 32.4, 1e-12);
}

TEST(Pathloss, NlosNotBelowLosAndMonotone) {
    double prev_los = 0.0, prev_nlos = 0.0;
    for (double d = 1.0; d < 1000.0; d *= 1.1) {
        const double los = pathloss_umi(d, 3.5, true);
        const double nlos = pathloss_umi(d, 3.5, false);
        EXPECT_GE(nlos, los);
        EXPECT_GE(los, prev_los);
        EXPECT_GE(nlos, prev_nlos);
        prev_los = los;
        prev_nlos = nlos;
    }
}

TEST(Shadowing, SigmaByState) {
    EXPECT_DOUBLE_EQ(shadowing_sigma_db(true), 4.0);
    EXPECT_DOUBLE_EQ(shadowing_sigma_db(false), 7.82);
}

TEST(Geometry, CircumradiusAndSectors) {
    const CellGeometry g;
    EXPECT_NEAR(g.circumradius_m(), 115.47, 0.005);
    EXPECT_EQ(g.sector_of({1.0, 0.1}), 0);
    EXPECT_EQ(g.sector_of({-1.0, 0.1}), 1);
    EXPECT_EQ(g.sector_of({-1.0, -0.1}), 1);
    EXPECT_EQ(g.sector_of({1.0, -0.1}), 2);
    EXPECT_DOUBLE_EQ(g.boresight_deg(0), 60.0);
    EXPECT_DOUBLE_EQ(g.boresight_deg(2), 300.0);
}

TEST(Geometry, ContainsAgreesWithOracle) {
    const CellGeometry g;
    Rng rng(11);
    const double r = g.circumradius_m();
    for (int i = 0; i < 100000; ++i) {
        const double x = rng.uniform(-1.2 * r, 1.2 * r), y = rng.uniform(-1.2 * r, 1.2 * r);
        ASSERT_EQ(g.contains({x, y}), oracle::in_hexagon(x, y, r)) << x << "," << y;
    }
}

TEST(Sampler, AllSamplesInsideAndAwayFromSite) {
    const CellGeometry g;
    Rng rng(12);
    double sx = 0.0, sy = 0.0;
    int inner = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto p = sample_hexagon(rng, g);
        ASSERT_TRUE(oracle::in_hexagon(p.x, p.y, g.circumradius_m()));
        ASSERT_GE(std::hypot(p.x, p.y), g.min_d2d_m);
        if (oracle::in_hexagon(p.x, p.y, g.circumradius_m() / 2.0)) ++inner;
        sx += p.x;
        sy += p.y;
    }
    EXPECT_LT(std::hypot(sx / n, sy / n), 5.0);
    // Uniform density: the half-size hexagon minus the excluded disc holds a
    // quarter of the area, less the disc.
    const double hex_area = 1.5 * std::numbers::sqrt3 * std::pow(g.circumradius_m(), 2);
    const double disc = std::numbers::pi * g.min_d2d_m * g.min_d2d_m;
    const double expected = (hex_area / 4.0 - disc) / (hex_area - disc);
    EXPECT_NEAR(static_cast<double>(inner) / n, expected, 0.01);
}

TEST(Drop, LinksAreConsistentWithPositions) {
    const CellGeometry g;
    Rng rng(13);
    for (int i = 0; i < 2000; ++i) {
        const auto d = sample_drop(rng, g);
        EXPECT_EQ(d.ue_sector, g.sector_of(d.ue_pos));
        EXPECT_EQ(d.eve_sector, g.sector_of(d.eve_pos));
        EXPECT_NEAR(d.ue_link.d2d_m, std::hypot(d.ue_pos.x, d.ue_pos.y), 1e-9);
        EXPECT_NEAR(d.eve_link.d3d_m, std::hypot(d.eve_link.d2d_m, 8.5), 1e-9);
        EXPECT_LT(d.ue_link.elevation_deg, 0.0);
        EXPECT_NEAR(d.ue_link.pathloss_db, pathloss_umi(d.ue_link.d3d_m, 3.5, d.ue_link.los), 1e-9);
    }
}

TEST(Drop, LosFractionFollowsProbability) {
    const CellGeometry g;
    Rng rng(14);
    double expected = 0.0;
    int los = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto l = make_link(rng, g, {60.0, 0.0}, 3.5);
        los += l.los;
        expected = los_probability(l.d2d_m);
    }
    EXPECT_NEAR(static_cast<double>(los) / n, expected, 0.015);
}

TEST(Steering, BroadsideIsUniform) {
    for (const auto& a : {UpaConfig::gnb(), UpaConfig::ue()}) {
        const auto v = steering_vector(a, 0.0, 0.0);
        ASSERT_EQ(static_cast<int>(v.size()), a.element_count());
        for (const auto& x : v) EXPECT_NEAR(std::abs(x - cd(1.0 / std::sqrt(v.size()))), 0.0, 1e-12);
    }
}

TEST(Steering, UnitNormAndDiscriminating) {
    Rng rng(15);
    const auto a = UpaConfig::gnb();
    for (int i = 0; i < 500; ++i) {
        const double az = rng.uniform(-90.0, 90.0), el = rng.uniform(-60.0, 60.0);
        const auto v = steering_vector(a, az, el);
        EXPECT_NEAR(norm2(v), 1.0, 1e-12);
        const auto w = steering_vector(a, az + 25.0, el);
        cd ip{};
        for (std::size_t k = 0; k < v.size(); ++k) ip += std::conj(v[k]) * w[k];
        EXPECT_LT(std::abs(ip), 1.0 - 1e-9);
    }
}

TEST(Steering, PhaseLayoutAndPolarizationCopies) {
    const UpaConfig a{4, 2, 2, 0.5};
    const double az = 20.0, el = -10.0;
    const auto v = steering_vector(a, az, el);
    const double uh = std::sin(az * kDeg) * std::cos(el * kDeg), uv = std::sin(el * kDeg);
    const int per_pol = a.rows * a.cols;
    for (int n = 0; n < a.rows; ++n)
        for (int m = 0; m < a.cols; ++m) {
            const cd ref = std::polar(1.0 / std::sqrt(16.0),
                                      2.0 * std::numbers::pi * 0.5 * (m * uh + n * uv));
            const int idx = n * a.cols + m;
            EXPECT_NEAR(std::abs(v[idx] - ref), 0.0, 1e-12);
            EXPECT_EQ(v[idx], v[idx + per_pol]);
        }
}

TEST(Codebook, CountIdsAndNorms) {
    const auto cb = dft_codebook(UpaConfig::gnb(), CellGeometry{});
    ASSERT_EQ(cb.size(), 24u);
    for (std::size_t i = 0; i < cb.size(); ++i) {
        EXPECT_EQ(cb[i].beam_id, static_cast<int>(i));
        EXPECT_EQ(cb[i].sector, static_cast<int>(i) / 8);
        EXPECT_NEAR(norm2(cb[i].weights), 1.0, 1e-12);
    }
}

TEST(Codebook, BestBeamBeatsSingleElement) {
    const CellGeometry g;
    const auto cb = dft_codebook(UpaConfig::gnb(), g);
    Rng rng(16);
    for (int i = 0; i < 300; ++i) {
        const auto pos = sample_hexagon(rng, g);
        const auto link = make_link(rng, g, pos, 3.5);
        const auto ch = single_ray(link.azimuth_deg, link.elevation_deg, 0.0, true);
        const int s = g.sector_of(pos);
        const double local = link.azimuth_deg - g.boresight_deg(s);
        const double element = std::pow(10.0, element_gain_dbi(local, link.elevation_deg) / 10.0);
        double best = 0.0;
        for (const auto& b : cb) best = std::max(best, std::norm(ch.beam_coupling(b, 0)));
        EXPECT_GE(best, element) << pos.x << "," << pos.y;
    }
}

TEST(Codebook, RejectsUnsupportedShapes) {
    EXPECT_THROW(dft_codebook(UpaConfig{4, 4, 2, 0.5}, CellGeometry{}), std::domain_error);
    EXPECT_THROW(dft_codebook(UpaConfig::gnb(), CellGeometry{}, 6), std::domain_error);
}

TEST(ElementPattern, PeakAndFloor) {
    EXPECT_DOUBLE_EQ(element_gain_dbi(0.0, 0.0), 8.0);
    EXPECT_NEAR(element_gain_dbi(65.0, 0.0), 8.0 - 12.0, 1e-12);
    EXPECT_DOUBLE_EQ(element_gain_dbi(180.0, 0.0), 8.0 - 30.0);
    EXPECT_DOUBLE_EQ(element_gain_dbi(180.0, 80.0), 8.0 - 30.0);
}

TEST(Channel, SmallScalePowerNormalized) {
    const CellGeometry g;
    Rng rng(17);
    double acc = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        auto link = make_link(rng, g, sample_hexagon(rng, g), 3.5);
        const auto ch = gen_channel(rng, link, UpaConfig::gnb(), UpaConfig::ue(), g, {});
        acc += ch.total_small_scale_power();
        EXPECT_EQ(ch.clusters().size(), 6u);
    }
    EXPECT_NEAR(acc / n, 1.0, 0.05);
}

TEST(Channel, RiceanFactorOnLosLinks) {
    const CellGeometry g;
    Rng rng(18);
    LinkState link;
    link.los = true;
    link.d2d_m = 50.0;
    link.azimuth_deg = 40.0;
    link.elevation_deg = -9.6;
    double dom = 0.0, scat = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto ch = gen_channel(rng, link, UpaConfig::gnb(), UpaConfig::ue(), g, {});
        ASSERT_TRUE(ch.clusters().front().dominant);
        EXPECT_EQ(ch.clusters().front().delay_samples, 0);
        for (const auto& c : ch.clusters()) (c.dominant ? dom : scat) += std::norm(c.gain);
    }
    EXPECT_NEAR(10.0 * std::log10(dom / scat), 9.0, 0.5);
}

TEST(Channel, DelaysInsideCyclicPrefix) {
    const CellGeometry g;
    Rng rng(19);
    for (int i = 0; i < 2000; ++i) {
        const auto link = make_link(rng, g, sample_hexagon(rng, g), 3.5);
        const auto ch = gen_channel(rng, link, UpaConfig::gnb(), UpaConfig::ue(), g, {});
        EXPECT_LT(ch.max_delay_samples(), 36);
        for (const auto& c : ch.clusters()) EXPECT_LT(c.delay_s, 2.344e-6);
    }
}

TEST(Channel, ElementPairGainIsReciprocal) {
    const CellGeometry g;
    Rng rng(20);
    const auto link = make_link(rng, g, {40.0, 30.0}, 3.5);
    const auto ch = gen_channel(rng, link, UpaConfig::gnb(), UpaConfig::ue(), g, {});
    const auto cb = dft_codebook(UpaConfig::gnb(), g);
    const auto& b = cb[3];
    for (int c = 0; c < static_cast<int>(ch.clusters().size()); ++c)
        for (int j = 0; j < ch.rx_count(); ++j) {
            cd acc{};
            for (int i = 0; i < ch.tx_count(); ++i)
                acc += std::conj(b.weights[i]) * ch.element_pair_gain(b.sector, c, i, j);
            EXPECT_NEAR(std::abs(acc - ch.path_coefficient(b, c, j)), 0.0, 1e-12);
        }
}

TEST(ApplyChannel, FlatChannelScalesWaveform) {
    const auto ch = single_ray(30.0, -5.0);
    const auto cb = dft_codebook(UpaConfig::gnb(), CellGeometry{});
    lpd::nr::Waveform tx;
    tx.sample_rate_hz = 15.36e6;
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) tx.samples.push_back(rng.complex_normal());
    const auto rx = apply_channel(tx, ch, cb[1], 0.0);
    ASSERT_EQ(rx.size(), 4u);
    for (int j = 0; j < 4; ++j) {
        const cd k = ch.path_coefficient(cb[1], 0, j);
        for (std::size_t i = 0; i < tx.samples.size(); ++i)
            ASSERT_NEAR(std::abs(rx[j].samples[i] - k * tx.samples[i]), 0.0, 1e-12);
    }
}

TEST(ApplyChannel, MinusInfinityGainSilences) {
    const auto ch = single_ray(30.0, -5.0);
    const auto cb = dft_codebook(UpaConfig::gnb(), CellGeometry{});
    lpd::nr::Waveform tx{std::vector<cd>(100, cd{1.0, 1.0}), 15.36e6, 0.0};
    const auto rx = apply_channel(tx, ch, cb[0], -std::numeric_limits<double>::infinity());
    for (const auto& w : rx)
        for (const auto& s : w.samples) EXPECT_EQ(s, cd{});
}

TEST(ApplyChannel, FlatLinkBudgetMatchesMeanGain) {
    const double lsg = -80.0;
    const auto ch = single_ray(75.0, -12.0, lsg, true);
    const auto cb = dft_codebook(UpaConfig::gnb(), CellGeometry{});
    Rng rng(22);
    lpd::nr::Waveform tx;
    tx.sample_rate_hz = 15.36e6;
    for (int i = 0; i < 4096; ++i) tx.samples.push_back(rng.complex_normal());
    const double ptx = norm2(tx.samples);
    const std::vector<int> bins{-100, 0, 37};
    for (const auto& b : cb) {
        const auto rx = apply_channel(tx, ch, b, lsg);
        double prx = 0.0;
        for (const auto& w : rx) prx += norm2(w.samples);
        prx /= rx.size();
        EXPECT_NEAR(prx / ptx / ch.mean_gain(b, bins, 512), 1.0, 1e-9);
    }
}

TEST(ApplyChannel, DelayedTapsShiftSamples) {
    Cluster a, c;
    a.gain = 1.0;
    c.gain = cd{0.0, 0.5};
    c.delay_samples = 5;
    const ChannelRealization ch({a, c}, 0.0, UpaConfig::gnb(), UpaConfig{1, 1, 1, 0.5},
                                CellGeometry{}, false);
    const auto cb = dft_codebook(UpaConfig::gnb(), CellGeometry{});
    lpd::nr::Waveform tx{std::vector<cd>(20), 15.36e6, 0.0};
    tx.samples[0] = 1.0;
    const auto rx = apply_channel(tx, ch, cb[0], 0.0);
    EXPECT_NEAR(std::abs(rx[0].samples[0] - ch.path_coefficient(cb[0], 0, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(rx[0].samples[5] - ch.path_coefficient(cb[0], 1, 0)), 0.0, 1e-12);
    EXPECT_EQ(rx[0].samples[3], cd{});
    // Frequency response of the two taps at a given bin.
    const cd h = ch.frequency_response(cb[0], 0, 10, 512);
    const cd ref = ch.path_coefficient(cb[0], 0, 0) +
                   ch.path_coefficient(cb[0], 1, 0) * std::polar(1.0, -2.0 * std::numbers::pi * 50 / 512);
    EXPECT_NEAR(std::abs(h - ref), 0.0, 1e-12);
}

TEST(ApplyChannel, AccumulateDropsSamplesPastEnd) {
    const auto ch = single_ray(0.0, 0.0);
    const auto cb = dft_codebook(UpaConfig::gnb(), CellGeometry{});
    std::vector<std::vector<std::complex<float>>> rx(4, std::vector<std::complex<float>>(10));
    const std::vector<cd> seg(8, cd{1.0, 0.0});
    accumulate_channel<float>(seg, 6, ch, cb[0], 1.0, rx);
    const auto k = ch.path_coefficient(cb[0], 0, 0);
    EXPECT_EQ(rx[0][5], std::complex<float>{});
    EXPECT_NEAR(std::abs(std::complex<double>(rx[0][9]) - k), 0.0, 1e-6);
}

TEST(Noise, ThermalFloorExamples) {
    EXPECT_NEAR(thermal_noise_dbm(15.36e6, 9.0), -93.14, 0.005);
    EXPECT_NEAR(thermal_noise_dbm(7.2e6, 9.0), -96.42, 0.01);
}

TEST(Noise, SampleStatistics) {
    Rng rng(23);
    lpd::nr::Waveform wf{std::vector<cd>(1000000), 15.36e6, 0.0};
    const double target_dbm = -93.14;
    add_noise(rng, wf, target_dbm);
    cd mean{}, pseudo{};
    double var = 0.0;
    for (const auto& s : wf.samples) {
        mean += s;
        pseudo += s * s;
        var += std::norm(s);
    }
    const double n = wf.samples.size();
    const double target = std::pow(10.0, target_dbm / 10.0);
    EXPECT_NEAR(var / n / target, 1.0, 0.01);
    EXPECT_LT(std::abs(mean / n) / std::sqrt(target), 0.01);
    EXPECT_LT(std::abs(pseudo / n) / target, 0.01);
}

}  // namespace
