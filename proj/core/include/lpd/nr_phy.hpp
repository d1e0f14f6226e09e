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

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lpd/rng.hpp"

namespace lpd::nr {

using cd = std::complex<double>;

inline constexpr int kSeqLen = 127;
inline constexpr int kSsbSubcarriers = 240;
inline constexpr int kSsbSymbols = 4;
/// First subcarrier (within the SSB) carrying PSS/SSS; they span [56, 182].
inline constexpr int kSyncFirstSubcarrier = 56;
/// PBCH filler: all of symbols 1 and 3 plus subcarriers 0..47 and 192..239 of symbol 2.
inline constexpr int kPbchEdgeWidth = 48;
inline constexpr int kPbchLength = 2 * kSsbSubcarriers + 2 * kPbchEdgeWidth;
inline constexpr int kNid1Count = 336;
inline constexpr int kNid2Count = 3;
inline constexpr int kCellIdCount = kNid1Count * kNid2Count;
/// First OFDM symbol of each of the 8 SSB candidates in a burst.
inline constexpr std::array<int, 8> kSsbCandidateSymbols = {2, 8, 16, 22, 30, 36, 44, 50};

struct PhysCellId {
    int nid1 = 0;
    int nid2 = 0;

    /// Throws std::domain_error when either id is out of range.
    static PhysCellId make(int nid1, int nid2);
    static PhysCellId from_cell_id(int cell_id);

    int cell_id() const { return 3 * nid1 + nid2; }
    bool valid() const { return nid1 >= 0 && nid1 < kNid1Count && nid2 >= 0 && nid2 < kNid2Count; }
    friend bool operator==(const PhysCellId&, const PhysCellId&) = default;
};

using BipolarSeq127 = std::array<std::int8_t, kSeqLen>;

/// 240 x 4 resource grid of one SSB, subcarrier-major.
struct SsbGrid {
    std::vector<cd> re = std::vector<cd>(kSsbSubcarriers * kSsbSymbols);
    PhysCellId pci;

    cd& at(int k, int l) { return re[static_cast<std::size_t>(k) * kSsbSymbols + l]; }
    const cd& at(int k, int l) const { return re[static_cast<std::size_t>(k) * kSsbSymbols + l]; }
    int nonzero_in_symbol(int l) const;
    double energy() const;
};

struct OfdmParams {
    double scs_hz = 30e3;
    int fft_size = 512;
    int cp_samples = 36;

    double sample_rate_hz() const { return scs_hz * fft_size; }
    int symbol_samples() const { return fft_size + cp_samples; }
    double symbol_duration_s() const { return symbol_samples() / sample_rate_hz(); }
    /// FFT bin (0..fft_size-1) of band-edge subcarrier index i, DC at fft_size/2.
    int bin_of(int band_index) const {
        return (band_index - fft_size / 2 + fft_size) % fft_size;
    }
};

struct Waveform {
    std::vector<cd> samples;
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;

    double duration_s() const { return samples.size() / sample_rate_hz; }
    double energy() const;
};

BipolarSeq127 gen_pss(int nid2);
BipolarSeq127 gen_sss(int nid1, int nid2);
/// Unit-magnitude QPSK filler for the PBCH resource elements.
std::vector<cd> gen_pbch_placeholder(Rng& rng);
SsbGrid assemble_ssb_grid(PhysCellId pci, std::span<const cd> pbch);

/// CP-OFDM modulation of the 4 SSB symbols, unitary DFT convention. The SSB
/// starts at band-edge subcarrier 12*freq_offset_prb; start_time_s is
/// symbol_offset symbol durations.
Waveform ofdm_modulate(const SsbGrid& grid, const OfdmParams& params, int freq_offset_prb,
                       int symbol_offset);
/// Inverse of ofdm_modulate. The waveform may be longer than 4 symbols; the
/// block is located from symbol_offset relative to wf.start_time_s.
SsbGrid ofdm_demodulate(const Waveform& wf, const OfdmParams& params, int freq_offset_prb,
                        int symbol_offset);

struct SsbTransmission {
    SsbGrid grid;
    int beam_id = 0;
    double power_dbm = 0.0;
    int burst_position = 0;
};

struct BeamWaveform {
    int beam_id = 0;
    Waveform waveform;
};

/// Places every transmission in each SSB period of the observation window
/// (one waveform per beam, silent elsewhere). power_dbm is the total power
/// over the 240 SSB subcarriers.
std::vector<BeamWaveform> compose_tx_window(std::span<const SsbTransmission> transmissions,
                                            const OfdmParams& params, int freq_offset_prb,
                                            double window_s = 0.025, double period_s = 0.020);

/// Sample index at which an SSB with the given burst position and period
/// index starts.
long ssb_start_sample(const OfdmParams& params, int burst_position, int period_index,
                      double period_s);

/// Linear per-RE amplitude (sqrt mW) for an SSB of total power power_dbm.
double per_re_amplitude(double power_dbm);

}  // namespace lpd::nr
