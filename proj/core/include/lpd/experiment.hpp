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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lpd/access_control.hpp"
#include "lpd/detection.hpp"
#include "lpd/nr_phy.hpp"
#include "lpd/propagation.hpp"

namespace lpd::exp {

using access::ScenarioKind;

struct PhyConfig {
    nr::OfdmParams ofdm;
    double window_s = 0.025;
    double period_s = 0.020;
};

struct PropagationConfig {
    prop::CellGeometry geometry;
    prop::UpaConfig gnb_array = prop::UpaConfig::gnb();
    /// Shared by the tactical UE and the eavesdropper.
    prop::UpaConfig ue_array = prop::UpaConfig::ue();
    double fc_ghz = 3.5;
    double noise_figure_db = 9.0;
    prop::ChannelModelConfig channel;
};

struct DetectionConfig {
    detect::SlidingWindowSpec window;
    detect::CorrelatorConfig correlator;
    double pfa = 0.10;
    int distance_bins = 10;
    double distance_min_m = 10.0;
    double distance_max_m = 116.0;
    int min_bin_trials = 20;

    std::vector<double> distance_edges() const;
};

struct CampaignConfig {
    long n_drops = 200;
    long n_realizations = 10;
    std::vector<ScenarioKind> arms{ScenarioKind::Baseline, ScenarioKind::Proposed};
    std::uint64_t seed = 42;
    /// 0 picks the hardware concurrency.
    int workers = 0;
    /// Keep the gNB off in both hypotheses (null-vs-null sanity runs).
    bool gnb_silent = false;
    PhyConfig phy;
    PropagationConfig propagation;
    access::AccessConfig access;
    DetectionConfig detection;

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

enum class Detector { Ue, EveEnergy, EveCorr };
inline constexpr Detector kDetectors[] = {Detector::Ue, Detector::EveEnergy, Detector::EveCorr};
std::string to_string(Detector d);

struct TrialRecord {
    long drop = 0;
    long realization = 0;
    ScenarioKind arm = ScenarioKind::Baseline;
    double ue_stat = 0.0;
    double eve_energy_stat = 0.0;
    double eve_corr_stat = 0.0;
    double ue_stat_h0 = 0.0;
    double eve_energy_stat_h0 = 0.0;
    double eve_corr_stat_h0 = 0.0;
    double eve_distance_m = 0.0;
    double ue_distance_m = 0.0;
    bool eve_los = false;
    bool ue_los = false;
    int sector = 0;
    int beam_id = 0;
    double p_tx_dbm = 0.0;
    double gamma_db = 0.0;
    /// Expected UE SNR over the SSB band on the selected beam.
    double ue_snr_db = 0.0;
    int transmissions = 0;

    double h1(Detector d) const;
    double h0(Detector d) const;
};

struct ArmRocs {
    ScenarioKind arm = ScenarioKind::Baseline;
    detect::RocCurve ue;
    detect::RocCurve eve_energy;
    detect::RocCurve eve_corr;

    const detect::RocCurve& curve(Detector d) const;
};

struct DistanceRow {
    double lo_m = 0.0;
    double hi_m = 0.0;
    ScenarioKind arm = ScenarioKind::Baseline;
    long trials = 0;
    std::optional<double> pd_energy;
    std::optional<double> pd_corr;
    bool low_confidence = false;
};

struct ArmSummary {
    ScenarioKind arm = ScenarioKind::Baseline;
    double pd_ue = 0.0;
    double pd_eve_energy = 0.0;
    double pd_eve_corr = 0.0;
    long trials = 0;
};

struct CampaignResults {
    CampaignConfig config;
    std::vector<TrialRecord> trials;
    std::vector<ArmRocs> rocs;
    std::vector<DistanceRow> distance_table;
    std::vector<ArmSummary> summary;
    double pfa = 0.10;
    /// Baseline minus proposed eavesdropper correlator pd (absolute).
    std::optional<double> eve_corr_pd_reduction;

    const ArmRocs* arm(ScenarioKind kind) const;
    const ArmSummary* arm_summary(ScenarioKind kind) const;
};

/// Cell id shared by every baseline trial of a campaign.
nr::PhysCellId baseline_cell_id(const CampaignConfig& config);

/// Per-sample noise variance (dBm) in the sample units of the synthesized
/// captures: thermal noise over one subcarrier, because the unitary OFDM
/// transform maps a per-RE power onto each frequency bin unchanged.
double sample_noise_dbm(const CampaignConfig& config);
/// Noise power over the SSB band at the UE (eta in the power-control rule).
double ssb_band_noise_dbm(const CampaignConfig& config);

/// One (drop, realization) for the requested arms, sharing geometry,
/// channels and the gNB-silent capture between arms.
std::vector<TrialRecord> run_pair(const CampaignConfig& config, long drop, long realization,
                                  const std::vector<ScenarioKind>& arms);
TrialRecord run_trial(const CampaignConfig& config, long drop, long realization,
                      ScenarioKind scenario);

using ProgressFn = std::function<void(long done, long total)>;
CampaignResults run_campaign(const CampaignConfig& config, const ProgressFn& progress = {});

/// Builds ROCs, summaries and the distance table from trial records.
CampaignResults summarize(const CampaignConfig& config, std::vector<TrialRecord> trials,
                          double pfa);

std::vector<DistanceRow> distance_binned_pd(const std::vector<TrialRecord>& trials,
                                            ScenarioKind arm, double pfa,
                                            const std::vector<double>& edges, int min_trials);

}  // namespace lpd::exp
