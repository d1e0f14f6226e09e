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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpd/nr_phy.hpp"
#include "lpd/propagation.hpp"
#include "lpd/rng.hpp"

namespace lpd::access {

enum class ScenarioKind { Baseline, Proposed };

std::string to_string(ScenarioKind kind);
/// Accepts "baseline" or "proposed"; throws std::invalid_argument otherwise.
ScenarioKind parse_scenario(const std::string& name);

struct AccessConfig {
    int beams_per_sector = 8;
    double baseline_power_dbm = 28.0;
    double s_target_db = 0.0;
    bool power_cap = true;
    double power_cap_dbm = 28.0;
    double power_floor_dbm = -100.0;
    double aux_tx_power_dbm = 23.0;
    int freq_offset_prb = 11;
    /// Campaign-wide baseline cell id; negative draws one from the seed.
    int baseline_cell_id = -1;
};

struct PowerControlInputs {
    double eta_tue_dbm = 0.0;
    double gamma_tue_db = 0.0;
    double s_target_db = 0.0;
};

struct PowerLimits {
    bool enabled = false;
    double min_dbm = -100.0;
    double max_dbm = 28.0;

    static PowerLimits from(const AccessConfig& c) {
        return {c.power_cap, c.power_floor_dbm, c.power_cap_dbm};
    }
};

struct ScheduledSsb {
    int sector = 0;
    int beam_id = 0;
    double power_dbm = 0.0;
    int burst_position = 0;
    nr::PhysCellId pci;
    int freq_offset_prb = 0;
};

struct TxPlan {
    ScenarioKind kind = ScenarioKind::Baseline;
    std::vector<ScheduledSsb> entries;
    /// Cell id carried in each SSB period of the observation window.
    std::vector<nr::PhysCellId> pci_per_period;
};

struct AuxUeMessage {
    nr::PhysCellId requested_pci;
    double aux_tx_power_dbm = 0.0;
    std::uint64_t nonce = 0;
};

struct AuxUplink {
    AuxUeMessage message;
    nr::Waveform waveform;
};

struct GenieResult {
    int sector = 0;
    int beam_id = 0;
    double gamma_db = 0.0;
    /// End-to-end gain of every codebook beam, indexed by beam_id.
    std::vector<double> gains_db;
};

inline constexpr int kZcLength = 139;
inline constexpr int kZcRoot = 1;
inline constexpr int kUplinkSubcarriers = 144;
inline constexpr int kPayloadBits = 82;

TxPlan baseline_schedule(nr::PhysCellId pci, const AccessConfig& config, int sector_count = 3);

/// Zadoff-Chu sequence x(n) = exp(-j pi u n (n+1) / N).
std::vector<nr::cd> zadoff_chu(int root, int length);
std::vector<int> encode_aux_payload(const AuxUeMessage& msg);
AuxUeMessage decode_aux_payload(const std::vector<int>& bits);

/// Two-symbol uplink: ZC preamble on symbol 0, BPSK payload on symbol 1,
/// both centered in a 12-PRB allocation at the aux transmit power.
AuxUplink aux_access_request(Rng& rng, const AccessConfig& config,
                             const nr::OfdmParams& ofdm = {});
/// Equalizes with the preamble (single complex gain) and slices the payload.
std::optional<AuxUeMessage> decode_aux_uplink(const nr::Waveform& wf,
                                              const nr::OfdmParams& ofdm = {});

/// FFT bins of the SSS subcarriers for an SSB at the given PRB offset.
std::vector<int> sss_bins(const nr::OfdmParams& ofdm, int freq_offset_prb);

GenieResult genie_beam_select(const prop::ChannelRealization& channel,
                              const std::vector<prop::Beam>& codebook,
                              const nr::OfdmParams& ofdm, int freq_offset_prb);

/// P_tx = eta - Gamma + S_target, clamped to the limits when enabled.
double power_control(const PowerControlInputs& in, const PowerLimits& limits = {});

/// One SSB per period on the selected beam with a fresh cell id per period.
TxPlan proposed_schedule(Rng& rng, const GenieResult& genie, double power_dbm,
                         const AccessConfig& config, int period_count);

}  // namespace lpd::access
