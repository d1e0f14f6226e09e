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

#include "lpd/access_control.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace lpd::access {

std::string to_string(ScenarioKind kind) {
    return kind == ScenarioKind::Baseline ? "baseline" : "proposed";
}

ScenarioKind parse_scenario(const std::string& name) {
    if (name == "baseline") return ScenarioKind::Baseline;
    if (name == "proposed") return ScenarioKind::Proposed;
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

TxPlan baseline_schedule(nr::PhysCellId pci, const AccessConfig& config, int sector_count) {
    if (!pci.valid()) throw std::domain_error("invalid cell id");
    TxPlan plan;
    plan.kind = ScenarioKind::Baseline;
    for (int s = 0; s < sector_count; ++s) {
        for (int b = 0; b < config.beams_per_sector; ++b) {
            plan.entries.push_back({s, s * config.beams_per_sector + b, config.baseline_power_dbm,
                                    b, pci, config.freq_offset_prb});
        }
    }
    return plan;
}

std::vector<nr::cd> zadoff_chu(int root, int length) {
    std::vector<nr::cd> x(length);
    for (int n = 0; n < length; ++n) {
        const double ph = -std::numbers::pi * root * n * (n + 1.0) / length;
        x[n] = std::polar(1.0, ph);
    }
    return x;
}

namespace {

void put_bits(std::vector<int>& out, std::uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<int>((value >> i) & 1U));
}

std::uint64_t take_bits(const std::vector<int>& in, std::size_t& pos, int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(in[pos++] & 1);
    return v;
}

int uplink_bin(const nr::OfdmParams& ofdm, int k) {
    return ofdm.bin_of(ofdm.fft_size / 2 - kUplinkSubcarriers / 2 + k);
}

constexpr int kZcFirst = (kUplinkSubcarriers - kZcLength) / 2;

}  // namespace

std::vector<int> encode_aux_payload(const AuxUeMessage& msg) {
    std::vector<int> bits;
    bits.reserve(kPayloadBits);
    put_bits(bits, static_cast<std::uint64_t>(msg.requested_pci.cell_id()), 10);
    const long p = std::clamp(std::lround(msg.aux_tx_power_dbm) + 128L, 0L, 255L);
    put_bits(bits, static_cast<std::uint64_t>(p), 8);
    put_bits(bits, msg.nonce, 64);
    return bits;
}

AuxUeMessage decode_aux_payload(const std::vector<int>& bits) {
    if (bits.size() != kPayloadBits) throw std::domain_error("aux payload must be 82 bits");
    std::size_t pos = 0;
    AuxUeMessage m;
    const auto cell = static_cast<int>(take_bits(bits, pos, 10));
    if (cell >= nr::kCellIdCount) throw std::domain_error("decoded cell id out of range");
    m.requested_pci = nr::PhysCellId::from_cell_id(cell);
    m.aux_tx_power_dbm = static_cast<double>(take_bits(bits, pos, 8)) - 128.0;
    m.nonce = take_bits(bits, pos, 64);
    return m;
}

AuxUplink aux_access_request(Rng& rng, const AccessConfig& config, const nr::OfdmParams& ofdm) {
    AuxUplink ul;
    ul.message.requested_pci =
        nr::PhysCellId::from_cell_id(static_cast<int>(rng.uniform_int(nr::kCellIdCount)));
    ul.message.aux_tx_power_dbm = config.aux_tx_power_dbm;
    ul.message.nonce = rng.next_u64();

    const int n = ofdm.fft_size;
    const int ns = ofdm.symbol_samples();
    const double amp = std::sqrt(std::pow(10.0, config.aux_tx_power_dbm / 10.0) / kUplinkSubcarriers);
    const auto zc = zadoff_chu(kZcRoot, kZcLength);
    const auto bits = encode_aux_payload(ul.message);

    const auto& ifft = detail::FftD::get(n, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ul.waveform.sample_rate_hz = ofdm.sample_rate_hz();
    ul.waveform.samples.assign(2 * static_cast<std::size_t>(ns), nr::cd{});
    std::vector<nr::cd> freq(n), time(n);
    for (int l = 0; l < 2; ++l) {
        std::fill(freq.begin(), freq.end(), nr::cd{});
        if (l == 0) {
            for (int k = 0; k < kZcLength; ++k) freq[uplink_bin(ofdm, kZcFirst + k)] = amp * zc[k];
        } else {
            for (int k = 0; k < kPayloadBits; ++k)
                freq[uplink_bin(ofdm, k)] = amp * (bits[k] ? -1.0 : 1.0);
        }
        ifft.execute(freq.data(), time.data());
        nr::cd* out = ul.waveform.samples.data() + static_cast<std::size_t>(l) * ns;
        for (int i = 0; i < ofdm.cp_samples; ++i) out[i] = time[n - ofdm.cp_samples + i] * scale;
        for (int i = 0; i < n; ++i) out[ofdm.cp_samples + i] = time[i] * scale;
    }
    return ul;
}

std::optional<AuxUeMessage> decode_aux_uplink(const nr::Waveform& wf, const nr::OfdmParams& ofdm) {
    const int n = ofdm.fft_size;
    const int ns = ofdm.symbol_samples();
    if (wf.samples.size() < 2 * static_cast<std::size_t>(ns)) return std::nullopt;
    const auto& fft = detail::FftD::get(n, -1);
    std::vector<nr::cd> y0(n), y1(n);
    fft.execute(wf.samples.data() + ofdm.cp_samples, y0.data());
    fft.execute(wf.samples.data() + ns + ofdm.cp_samples, y1.data());

    const auto zc = zadoff_chu(kZcRoot, kZcLength);
    nr::cd h{};
    for (int k = 0; k < kZcLength; ++k) h += y0[uplink_bin(ofdm, kZcFirst + k)] * std::conj(zc[k]);
    if (std::abs(h) == 0.0) return std::nullopt;

    std::vector<int> bits(kPayloadBits);
    for (int k = 0; k < kPayloadBits; ++k)
        bits[k] = (y1[uplink_bin(ofdm, k)] * std::conj(h)).real() < 0.0 ? 1 : 0;
    try {
        return decode_aux_payload(bits);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

std::vector<int> sss_bins(const nr::OfdmParams& ofdm, int freq_offset_prb) {
    std::vector<int> bins(nr::kSeqLen);
    for (int m = 0; m < nr::kSeqLen; ++m)
        bins[m] = ofdm.bin_of(12 * freq_offset_prb + nr::kSyncFirstSubcarrier + m);
    return bins;
}

GenieResult genie_beam_select(const prop::ChannelRealization& channel,
                              const std::vector<prop::Beam>& codebook,
                              const nr::OfdmParams& ofdm, int freq_offset_prb) {
    if (codebook.empty()) throw std::domain_error("empty codebook");
    const auto bins = sss_bins(ofdm, freq_offset_prb);
    GenieResult r;
    r.gains_db.assign(codebook.size(), -std::numeric_limits<double>::infinity());
    bool first = true;
    for (const auto& beam : codebook) {
        const double g = 10.0 * std::log10(channel.mean_gain(beam, bins, ofdm.fft_size));
        r.gains_db[beam.beam_id] = g;
        if (first || g > r.gamma_db) {
            r.gamma_db = g;
            r.sector = beam.sector;
            r.beam_id = beam.beam_id;
            first = false;
        }
    }
    return r;
}

double power_control(const PowerControlInputs& in, const PowerLimits& limits) {
    static std::atomic<bool> warned{false};
    if (in.gamma_tue_db > 0.0 && !warned.exchange(true))
        std::clog << "warning: positive end-to-end gain " << in.gamma_tue_db << " dB\n";
    const double p = in.eta_tue_dbm - in.gamma_tue_db + in.s_target_db;
    if (!limits.enabled) return p;
    return std::clamp(p, limits.min_dbm, limits.max_dbm);
}

TxPlan proposed_schedule(Rng& rng, const GenieResult& genie, double power_dbm,
                         const AccessConfig& config, int period_count) {
    if (period_count < 1) throw std::domain_error("need at least one period");
    TxPlan plan;
    plan.kind = ScenarioKind::Proposed;
    for (int p = 0; p < period_count; ++p)
        plan.pci_per_period.push_back(
            nr::PhysCellId::from_cell_id(static_cast<int>(rng.uniform_int(nr::kCellIdCount))));
    plan.entries.push_back({genie.sector, genie.beam_id, power_dbm, 0, plan.pci_per_period.front(),
                            config.freq_offset_prb});
    return plan;
}

}  // namespace lpd::access
