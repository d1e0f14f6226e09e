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
#include <set>

#include "lpd/nr_phy.hpp"
#include "oracle.hpp"

namespace {

using namespace lpd::nr;

SsbGrid random_grid(lpd::Rng& rng, PhysCellId pci) {
    return assemble_ssb_grid(pci, gen_pbch_placeholder(rng));
}

TEST(PhysCellId, CellIdRoundTrip) {
    for (int c = 0; c < kCellIdCount; ++c) {
        const auto p = PhysCellId::from_cell_id(c);
        EXPECT_TRUE(p.valid());
        EXPECT_EQ(p.cell_id(), c);
        EXPECT_EQ(p.cell_id(), 3 * p.nid1 + p.nid2);
    }
    EXPECT_THROW(PhysCellId::make(336, 0), std::domain_error);
    EXPECT_THROW(PhysCellId::make(0, 3), std::domain_error);
    EXPECT_THROW(PhysCellId::from_cell_id(1008), std::domain_error);
}

TEST(Pss, FirstValuesForNid2Zero) {
    const auto d = gen_pss(0);
    EXPECT_EQ(d[0], 1);
    EXPECT_EQ(d[1], -1);
    EXPECT_EQ(d[2], -1);
    EXPECT_EQ(d[3], 1);
}

TEST(Pss, MatchesOracleAndIsBipolar) {
    for (int nid2 = 0; nid2 < 3; ++nid2) {
        const auto d = gen_pss(nid2);
        const auto ref = oracle::pss(nid2);
        int energy = 0;
        for (int n = 0; n < 127; ++n) {
            ASSERT_EQ(d[n], ref[n]) << "nid2=" << nid2 << " n=" << n;
            energy += d[n] * d[n];
        }
        EXPECT_EQ(energy, 127);
    }
}

TEST(Pss, SequencesAreCyclicShiftsBy43) {
    const auto a = gen_pss(0), b = gen_pss(1), c = gen_pss(2);
    for (int n = 0; n < 127; ++n) {
        EXPECT_EQ(b[n], a[(n + 43) % 127]);
        EXPECT_EQ(c[n], a[(n + 86) % 127]);
    }
}

TEST(Pss, AutocorrelationSidelobesBelowThreshold) {
    for (int nid2 = 0; nid2 < 3; ++nid2) {
        const auto d = gen_pss(nid2);
        for (int lag = 1; lag < 127; ++lag) {
            int acc = 0;
            for (int n = 0; n < 127; ++n) acc += d[n] * d[(n + lag) % 127];
            EXPECT_LE(std::abs(acc), 0.35 * 127) << "lag " << lag;
        }
    }
}

TEST(Pss, RejectsInvalidNid2) {
    EXPECT_THROW(gen_pss(-1), std::domain_error);
    EXPECT_THROW(gen_pss(3), std::domain_error);
}

TEST(Sss, MatchesOracleForAllCellIds) {
    for (int nid2 = 0; nid2 < 3; ++nid2)
        for (int nid1 = 0; nid1 < 336; ++nid1) {
            const auto d = gen_sss(nid1, nid2);
            const auto ref = oracle::sss(nid1, nid2);
            for (int n = 0; n < 127; ++n)
                ASSERT_EQ(d[n], ref[n]) << nid1 << "," << nid2 << " n=" << n;
        }
}

TEST(Sss, AllSequencesDistinct) {
    std::set<BipolarSeq127> seen;
    for (int c = 0; c < kCellIdCount; ++c) {
        const auto p = PhysCellId::from_cell_id(c);
        seen.insert(gen_sss(p.nid1, p.nid2));
    }
    EXPECT_EQ(seen.size(), 1008u);
}

TEST(Sss, NeighbouringIdsAreNotFullyCorrelated) {
    const auto a = gen_sss(0, 0), b = gen_sss(1, 0);
    int acc = 0;
    for (int n = 0; n < 127; ++n) acc += a[n] * b[n];
    EXPECT_LT(std::abs(acc) / 127.0, 1.0);
}

TEST(Sss, RejectsInvalidIds) {
    EXPECT_THROW(gen_sss(336, 0), std::domain_error);
    EXPECT_THROW(gen_sss(0, 3), std::domain_error);
    EXPECT_THROW(gen_sss(-1, 0), std::domain_error);
}

TEST(Pbch, UnitMagnitudeAndDeterministic) {
    lpd::Rng a(3), b(3);
    const auto x = gen_pbch_placeholder(a);
    const auto y = gen_pbch_placeholder(b);
    ASSERT_EQ(x.size(), static_cast<std::size_t>(kPbchLength));
    EXPECT_EQ(x, y);
    for (const auto& v : x) EXPECT_NEAR(std::abs(v), 1.0, 1e-12);
}

TEST(SsbGrid, ResourceMapMatchesLayout) {
    lpd::Rng rng(1);
    const auto pci = PhysCellId::make(17, 2);
    const auto g = random_grid(rng, pci);
    const auto pss = gen_pss(2);
    const auto sss = gen_sss(17, 2);
    for (int k = 0; k < kSsbSubcarriers; ++k) {
        const bool sync = k >= 56 && k <= 182;
        EXPECT_EQ(g.at(k, 0), sync ? cd(pss[k - 56]) : cd{}) << k;
        EXPECT_NEAR(std::abs(g.at(k, 1)), 1.0, 1e-12);
        EXPECT_NEAR(std::abs(g.at(k, 3)), 1.0, 1e-12);
        if (sync)
            EXPECT_EQ(g.at(k, 2), cd(sss[k - 56]));
        else if ((k >= 48 && k <= 55) || (k >= 183 && k <= 191))
            EXPECT_EQ(g.at(k, 2), cd{});
        else
            EXPECT_NEAR(std::abs(g.at(k, 2)), 1.0, 1e-12);
    }
    EXPECT_EQ(g.nonzero_in_symbol(0), 127);
    EXPECT_EQ(g.nonzero_in_symbol(1), 240);
    EXPECT_EQ(g.nonzero_in_symbol(3), 240);
    const int occupied = g.nonzero_in_symbol(0) + g.nonzero_in_symbol(1) +
                         g.nonzero_in_symbol(2) + g.nonzero_in_symbol(3);
    EXPECT_NEAR(g.energy(), occupied, 1e-9);
    EXPECT_NEAR(g.energy(), 127 + 127 + kPbchLength, 1e-9);
}

TEST(SsbGrid, RejectsWrongFillerLength) {
    std::vector<cd> filler(kPbchLength - 1, cd{1.0, 0.0});
    EXPECT_THROW(assemble_ssb_grid(PhysCellId::make(0, 0), filler), std::domain_error);
}

TEST(Ofdm, ParamsMatchNumerology) {
    const OfdmParams p;
    EXPECT_DOUBLE_EQ(p.sample_rate_hz(), 15.36e6);
    EXPECT_EQ(p.symbol_samples(), 548);
    EXPECT_LE(240 * p.scs_hz, p.sample_rate_hz());
    EXPECT_EQ(p.bin_of(256), 0);
    EXPECT_EQ(p.bin_of(0), 256);
}

TEST(Ofdm, RoundTripRecoversGrid) {
    lpd::Rng rng(2);
    const OfdmParams p;
    for (int prb : {0, 11, 22}) {
        const auto g = random_grid(rng, PhysCellId::make(100, 1));
        const auto wf = ofdm_modulate(g, p, prb, 5);
        const auto back = ofdm_demodulate(wf, p, prb, 5);
        double err = 0.0;
        for (std::size_t i = 0; i < g.re.size(); ++i) err = std::max(err, std::abs(g.re[i] - back.re[i]));
        EXPECT_LT(err, 1e-9) << "prb " << prb;
    }
}

TEST(Ofdm, SubcarrierMappingMatchesReferenceDft) {
    lpd::Rng rng(4);
    const OfdmParams p;
    const int prb = 7;
    const auto g = random_grid(rng, PhysCellId::make(3, 0));
    const auto wf = ofdm_modulate(g, p, prb, 0);
    for (int l = 0; l < 4; ++l) {
        std::vector<cd> useful(wf.samples.begin() + l * 548 + 36, wf.samples.begin() + (l + 1) * 548);
        const auto freq = oracle::dft(useful, -1, true);
        for (int k = 0; k < 240; ++k) {
            const int bin = (12 * prb + k - 256 + 512) % 512;
            ASSERT_NEAR(std::abs(freq[bin] - g.at(k, l)), 0.0, 1e-9) << l << "," << k;
        }
        // Cyclic prefix copies the tail of the useful part.
        for (int i = 0; i < 36; ++i)
            ASSERT_NEAR(std::abs(wf.samples[l * 548 + i] - wf.samples[l * 548 + 512 + i]), 0.0, 1e-12);
    }
}

TEST(Ofdm, ZeroGridGivesZeroWaveform) {
    SsbGrid g;
    const auto wf = ofdm_modulate(g, OfdmParams{}, 0, 0);
    for (const auto& s : wf.samples) EXPECT_EQ(s, cd{});
}

TEST(Ofdm, UsefulPartEnergyEqualsGridEnergy) {
    lpd::Rng rng(5);
    const OfdmParams p;
    const auto g = random_grid(rng, PhysCellId::make(200, 2));
    const auto wf = ofdm_modulate(g, p, 11, 0);
    double e = 0.0;
    for (int l = 0; l < 4; ++l)
        for (int i = 36; i < 548; ++i) e += std::norm(wf.samples[l * 548 + i]);
    EXPECT_NEAR(e / g.energy(), 1.0, 1e-9);
}

TEST(Ofdm, RejectsOutOfBandPlacement) {
    SsbGrid g;
    EXPECT_THROW(ofdm_modulate(g, OfdmParams{}, 23, 0), std::domain_error);
    EXPECT_THROW(ofdm_modulate(g, OfdmParams{}, -1, 0), std::domain_error);
}

TEST(Ofdm, DemodulateRejectsTruncatedWaveform) {
    Waveform wf;
    wf.sample_rate_hz = 15.36e6;
    wf.samples.assign(3 * 548, cd{});
    EXPECT_THROW(ofdm_demodulate(wf, OfdmParams{}, 0, 0), std::domain_error);
}

TEST(Ofdm, SymbolMisalignmentDestroysPssCorrelation) {
    lpd::Rng rng(6);
    const OfdmParams p;
    const auto g = random_grid(rng, PhysCellId::make(9, 1));
    Waveform wf;
    wf.sample_rate_hz = p.sample_rate_hz();
    wf.samples.assign(8 * 548, cd{});
    const auto ssb = ofdm_modulate(g, p, 11, 0);
    std::copy(ssb.samples.begin(), ssb.samples.end(), wf.samples.begin() + 2 * 548);
    const auto pss = gen_pss(1);
    auto corr = [&](int symbol_offset) {
        const auto grid = ofdm_demodulate(wf, p, 11, symbol_offset);
        cd acc{};
        for (int m = 0; m < 127; ++m) acc += grid.at(56 + m, 0) * static_cast<double>(pss[m]);
        return std::abs(acc);
    };
    const double peak = corr(2);
    EXPECT_NEAR(peak, 127.0, 1e-6);
    EXPECT_LT(corr(3), 0.5 * peak);
    EXPECT_LT(corr(1), 0.5 * peak);
}

TEST(Ofdm, NoiseOnlyDemodulationPreservesPerRePower) {
    lpd::Rng rng(7);
    const OfdmParams p;
    Waveform wf;
    wf.sample_rate_hz = p.sample_rate_hz();
    wf.samples.resize(4 * 548);
    double acc = 0.0;
    long count = 0;
    for (int t = 0; t < 200; ++t) {
        for (auto& s : wf.samples) s = rng.complex_normal(0.5);
        const auto g = ofdm_demodulate(wf, p, 3, 0);
        double one = 0.0;
        for (const auto& v : g.re) one += std::norm(v);
        EXPECT_LT(std::abs(10.0 * std::log10(one / g.re.size() / 0.5)), 3.0);
        acc += one;
        count += static_cast<long>(g.re.size());
    }
    EXPECT_NEAR(acc / count, 0.5, 0.01);
}

TEST(Burst, StartSamplesFollowCandidateSymbols) {
    const OfdmParams p;
    for (int pos = 0; pos < 8; ++pos)
        EXPECT_EQ(ssb_start_sample(p, pos, 0, 0.02), kSsbCandidateSymbols[pos] * 548L);
    EXPECT_EQ(ssb_start_sample(p, 0, 1, 0.02), 307200L + 2 * 548);
    EXPECT_THROW(ssb_start_sample(p, 8, 0, 0.02), std::domain_error);
}

TEST(Burst, SingleSsbOccupiesFourSymbolsPerPeriod) {
    lpd::Rng rng(8);
    const OfdmParams p;
    std::vector<SsbTransmission> tx{{random_grid(rng, PhysCellId::make(1, 1)), 3, 10.0, 0}};
    const auto beams = compose_tx_window(tx, p, 11);
    ASSERT_EQ(beams.size(), 1u);
    const auto& s = beams[0].waveform.samples;
    ASSERT_EQ(s.size(), 384000u);
    const long a0 = 2 * 548, a1 = a0 + 4 * 548;
    const long b0 = 307200 + a0, b1 = b0 + 4 * 548;
    for (long i = 0; i < static_cast<long>(s.size()); ++i) {
        const bool inside = (i >= a0 && i < a1) || (i >= b0 && i < b1);
        if (!inside) {
            ASSERT_EQ(s[i], cd{}) << i;
        }
    }
    double e = 0.0;
    for (long i = a0; i < a1; ++i) e += std::norm(s[i]);
    EXPECT_GT(e, 0.0);
}

TEST(Burst, EightBeamBurstIsDisjointWithinFiveMs) {
    lpd::Rng rng(9);
    const OfdmParams p;
    std::vector<SsbTransmission> tx;
    for (int b = 0; b < 8; ++b) tx.push_back({random_grid(rng, PhysCellId::make(5, 0)), b, 28.0, b});
    const auto beams = compose_tx_window(tx, p, 11);
    ASSERT_EQ(beams.size(), 8u);
    std::vector<int> owner(307200, -1);
    for (const auto& bw : beams) {
        for (long i = 0; i < 307200; ++i) {
            if (bw.waveform.samples[i] == cd{}) continue;
            ASSERT_LT(i, 76800) << "beyond 5 ms";
            ASSERT_TRUE(owner[i] == -1 || owner[i] == bw.beam_id) << "overlap at " << i;
            owner[i] = bw.beam_id;
        }
    }
}

TEST(Burst, SecondPeriodIsTruncatedByWindow) {
    lpd::Rng rng(10);
    const OfdmParams p;
    std::vector<SsbTransmission> tx{{random_grid(rng, PhysCellId::make(2, 2)), 0, 0.0, 7}};
    const auto beams = compose_tx_window(tx, p, 0, 0.0205, 0.02);
    const auto& s = beams[0].waveform.samples;
    ASSERT_EQ(s.size(), 314880u);
    const long start = 307200 + 50 * 548;
    EXPECT_GT(start, static_cast<long>(s.size()));
    EXPECT_EQ(s.back(), cd{});
}

TEST(Burst, PowerScalesPerReAmplitude) {
    EXPECT_NEAR(per_re_amplitude(10.0 * std::log10(240.0)), 1.0, 1e-12);
    EXPECT_NEAR(20.0 * std::log10(per_re_amplitude(28.0) / per_re_amplitude(18.0)), 10.0, 1e-9);
}

TEST(Burst, OverlappingPlacementOnOneBeamIsRejected) {
    lpd::Rng rng(11);
    std::vector<SsbTransmission> tx{{random_grid(rng, PhysCellId::make(2, 2)), 0, 0.0, 1},
                                    {random_grid(rng, PhysCellId::make(2, 2)), 0, 0.0, 1}};
    EXPECT_THROW(compose_tx_window(tx, OfdmParams{}, 0), std::domain_error);
}

}  // namespace
