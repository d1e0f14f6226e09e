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

#include "lpd/nr_phy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace lpd::nr {

namespace {

using Register = std::array<std::uint8_t, kSeqLen>;

// x(i+7) = (x(i+tap) + x(i)) mod 2
Register m_sequence(std::array<std::uint8_t, 7> init, int tap) {
    Register x{};
    std::copy(init.begin(), init.end(), x.begin());
    for (int i = 0; i + 7 < kSeqLen; ++i) x[i + 7] = (x[i + tap] + x[i]) % 2;
    return x;
}

const Register& pss_register() {
    static const Register x = m_sequence({0, 1, 1, 0, 1, 1, 1}, 4);
    return x;
}

const Register& sss_register0() {
    static const Register x = m_sequence({1, 0, 0, 0, 0, 0, 0}, 4);
    return x;
}

const Register& sss_register1() {
    static const Register x = m_sequence({1, 0, 0, 0, 0, 0, 0}, 1);
    return x;
}

inline std::int8_t bpsk(std::uint8_t bit) { return static_cast<std::int8_t>(1 - 2 * bit); }

void check_nid2(int nid2) {
    if (nid2 < 0 || nid2 >= kNid2Count)
        throw std::domain_error("nid2 out of range: " + std::to_string(nid2));
}

void check_nid1(int nid1) {
    if (nid1 < 0 || nid1 >= kNid1Count)
        throw std::domain_error("nid1 out of range: " + std::to_string(nid1));
}

void check_placement(const OfdmParams& params, int freq_offset_prb) {
    if (freq_offset_prb < 0 || 12 * freq_offset_prb + kSsbSubcarriers > params.fft_size)
        throw std::domain_error("SSB placement outside the FFT span: prb offset " +
                                std::to_string(freq_offset_prb));
}

}  // namespace

PhysCellId PhysCellId::make(int nid1, int nid2) {
    check_nid1(nid1);
    check_nid2(nid2);
    return {nid1, nid2};
}

PhysCellId PhysCellId::from_cell_id(int cell_id) {
    if (cell_id < 0 || cell_id >= kCellIdCount)
        throw std::domain_error("cell id out of range: " + std::to_string(cell_id));
    return {cell_id / 3, cell_id % 3};
}

int SsbGrid::nonzero_in_symbol(int l) const {
    int n = 0;
    for (int k = 0; k < kSsbSubcarriers; ++k) n += at(k, l) != cd{};
    return n;
}

double SsbGrid::energy() const {
    double e = 0.0;
    for (const auto& v : re) e += std::norm(v);
    return e;
}

double Waveform::energy() const {
    double e = 0.0;
    for (const auto& v : samples) e += std::norm(v);
    return e;
}

BipolarSeq127 gen_pss(int nid2) {
    check_nid2(nid2);
    const auto& x = pss_register();
    BipolarSeq127 d{};
    for (int n = 0; n < kSeqLen; ++n) d[n] = bpsk(x[(n + 43 * nid2) % kSeqLen]);
    return d;
}

BipolarSeq127 gen_sss(int nid1, int nid2) {
    check_nid1(nid1);
    check_nid2(nid2);
    const auto& x0 = sss_register0();
    const auto& x1 = sss_register1();
    const int m0 = 15 * (nid1 / 112) + 5 * nid2;
    const int m1 = nid1 % 112;
    BipolarSeq127 d{};
    for (int n = 0; n < kSeqLen; ++n)
        d[n] = static_cast<std::int8_t>(bpsk(x0[(n + m0) % kSeqLen]) *
                                        bpsk(x1[(n + m1) % kSeqLen]));
    return d;
}

std::vector<cd> gen_pbch_placeholder(Rng& rng) {
    static constexpr double a = std::numbers::sqrt2 / 2.0;
    std::vector<cd> out(kPbchLength);
    for (auto& v : out) {
        const auto bits = rng();
        v = {(bits & 1u) ? -a : a, (bits & 2u) ? -a : a};
    }
    return out;
}

SsbGrid assemble_ssb_grid(PhysCellId pci, std::span<const cd> pbch) {
    if (!pci.valid()) throw std::domain_error("invalid physical cell id");
    if (pbch.size() != static_cast<std::size_t>(kPbchLength))
        throw std::domain_error("PBCH filler must have " + std::to_string(kPbchLength) +
                                " values, got " + std::to_string(pbch.size()));
    SsbGrid g;
    g.pci = pci;
    const auto pss = gen_pss(pci.nid2);
    const auto sss = gen_sss(pci.nid1, pci.nid2);
    for (int n = 0; n < kSeqLen; ++n) {
        g.at(kSyncFirstSubcarrier + n, 0) = static_cast<double>(pss[n]);
        g.at(kSyncFirstSubcarrier + n, 2) = static_cast<double>(sss[n]);
    }
    std::size_t p = 0;
    for (int k = 0; k < kSsbSubcarriers; ++k) g.at(k, 1) = pbch[p++];
    for (int k = 0; k < kPbchEdgeWidth; ++k) g.at(k, 2) = pbch[p++];
    for (int k = kSsbSubcarriers - kPbchEdgeWidth; k < kSsbSubcarriers; ++k) g.at(k, 2) = pbch[p++];
    for (int k = 0; k < kSsbSubcarriers; ++k) g.at(k, 3) = pbch[p++];
    return g;
}

Waveform ofdm_modulate(const SsbGrid& grid, const OfdmParams& params, int freq_offset_prb,
                       int symbol_offset) {
    check_placement(params, freq_offset_prb);
    if (symbol_offset < 0) throw std::domain_error("negative symbol offset");
    const int n = params.fft_size;
    const int ns = params.symbol_samples();
    const auto& ifft = detail::FftD::get(n, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    Waveform wf;
    wf.sample_rate_hz = params.sample_rate_hz();
    wf.start_time_s = symbol_offset * params.symbol_duration_s();
    wf.samples.assign(static_cast<std::size_t>(kSsbSymbols) * ns, cd{});

    std::vector<cd> freq(n), time(n);
    for (int l = 0; l < kSsbSymbols; ++l) {
        std::fill(freq.begin(), freq.end(), cd{});
        for (int k = 0; k < kSsbSubcarriers; ++k)
            freq[params.bin_of(12 * freq_offset_prb + k)] = grid.at(k, l);
        ifft.execute(freq.data(), time.data());
        cd* out = wf.samples.data() + static_cast<std::size_t>(l) * ns;
        for (int i = 0; i < params.cp_samples; ++i)
            out[i] = time[n - params.cp_samples + i] * scale;
        for (int i = 0; i < n; ++i) out[params.cp_samples + i] = time[i] * scale;
    }
    return wf;
}

SsbGrid ofdm_demodulate(const Waveform& wf, const OfdmParams& params, int freq_offset_prb,
                        int symbol_offset) {
    check_placement(params, freq_offset_prb);
    const int n = params.fft_size;
    const int ns = params.symbol_samples();
    const long first = static_cast<long>(symbol_offset) * ns -
                       std::lround(wf.start_time_s * params.sample_rate_hz());
    if (first < 0 || first + static_cast<long>(kSsbSymbols) * ns >
                         static_cast<long>(wf.samples.size()))
        throw std::domain_error("waveform too short for 4 symbols at symbol offset " +
                                std::to_string(symbol_offset));
    const auto& fft = detail::FftD::get(n, -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    SsbGrid g;
    std::vector<cd> freq(n);
    for (int l = 0; l < kSsbSymbols; ++l) {
        const cd* in = wf.samples.data() + first + static_cast<long>(l) * ns + params.cp_samples;
        fft.execute(in, freq.data());
        for (int k = 0; k < kSsbSubcarriers; ++k)
            g.at(k, l) = freq[params.bin_of(12 * freq_offset_prb + k)] * scale;
    }
    return g;
}

long ssb_start_sample(const OfdmParams& params, int burst_position, int period_index,
                      double period_s) {
    if (burst_position < 0 || burst_position >= static_cast<int>(kSsbCandidateSymbols.size()))
        throw std::domain_error("burst position out of range: " + std::to_string(burst_position));
    const long period = std::lround(period_s * params.sample_rate_hz());
    return period_index * period +
           static_cast<long>(kSsbCandidateSymbols[burst_position]) * params.symbol_samples();
}

double per_re_amplitude(double power_dbm) {
    return std::sqrt(std::pow(10.0, power_dbm / 10.0) / kSsbSubcarriers);
}

std::vector<BeamWaveform> compose_tx_window(std::span<const SsbTransmission> transmissions,
                                            const OfdmParams& params, int freq_offset_prb,
                                            double window_s, double period_s) {
    const long window = std::lround(window_s * params.sample_rate_hz());
    const long block = static_cast<long>(kSsbSymbols) * params.symbol_samples();
    const int periods = static_cast<int>(std::ceil(window_s / period_s - 1e-12));

    std::map<int, BeamWaveform> beams;
    std::map<int, std::vector<int>> positions;
    for (const auto& tx : transmissions) {
        auto& used = positions[tx.beam_id];
        if (std::find(used.begin(), used.end(), tx.burst_position) != used.end())
            throw std::domain_error("overlapping SSB placements on beam " +
                                    std::to_string(tx.beam_id));
        used.push_back(tx.burst_position);

        auto& bw = beams[tx.beam_id];
        if (bw.waveform.samples.empty()) {
            bw.beam_id = tx.beam_id;
            bw.waveform.sample_rate_hz = params.sample_rate_hz();
            bw.waveform.samples.assign(window, cd{});
        }
        const auto ssb = ofdm_modulate(tx.grid, params, freq_offset_prb, 0);
        const double amp = per_re_amplitude(tx.power_dbm);
        for (int p = 0; p < periods; ++p) {
            const long start = ssb_start_sample(params, tx.burst_position, p, period_s);
            if (start >= window) continue;
            const long stop = std::min(window, start + block);
            for (long i = start; i < stop; ++i)
                bw.waveform.samples[i] += amp * ssb.samples[i - start];
        }
    }
    std::vector<BeamWaveform> out;
    for (auto& [id, bw] : beams) out.push_back(std::move(bw));
    return out;
}

}  // namespace lpd::nr
