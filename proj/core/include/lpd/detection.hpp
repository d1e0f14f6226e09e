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
#include <cstdint>
#include <span>
#include <vector>

#include "lpd/nr_phy.hpp"

namespace lpd::detect {

using cf = std::complex<float>;

/// Multi-element receive capture. noise_power is the per-sample variance of
/// the thermal noise in the same units as the samples.
struct CaptureWindow {
    std::vector<std::vector<cf>> elements;
    double noise_power = 1.0;
    double sample_rate_hz = 15.36e6;

    int element_count() const { return static_cast<int>(elements.size()); }
    long samples() const { return elements.empty() ? 0 : static_cast<long>(elements[0].size()); }
};

struct SlidingWindowSpec {
    int freq_width_sc = 240;
    int time_width_symbols = 4;
    int freq_step_sc = 12;
    /// Hop between consecutive transform frames; half a symbol by default.
    int time_step_samples = 274;
};

struct DetectorStatistic {
    double value = 0.0;
    long time_index = 0;
    int freq_index = 0;
    /// Cell id of the winning hypothesis, -1 for the energy detector.
    int cell_id = -1;
};

/// Max over window positions of the window energy, elements summed
/// non-coherently, normalized by the expected noise energy per window.
DetectorStatistic energy_detect(const CaptureWindow& capture, const SlidingWindowSpec& spec = {},
                                const nr::OfdmParams& ofdm = {});

struct CorrelatorConfig {
    /// Drop the SSS term from the statistic.
    bool pss_only = false;
};

/// Per-block PSS/SSS search results for every NID2 hypothesis. Blocks are
/// one symbol (fft + cp samples) of candidate PSS start times; within each
/// block and NID2 the candidate is the strongest PSS correlation over time
/// and frequency shift, and the SSS is correlated against all 336 NID1 at
/// that candidate.
class CorrelatorMap {
public:
    struct Candidate {
        long time_index = 0;
        int freq_shift = 0;
        float pss_energy = 0.0f;
    };

    CorrelatorMap() = default;
    CorrelatorMap(long capture_samples, int element_count, double noise_power,
                  const nr::OfdmParams& ofdm);

    long capture_samples() const { return capture_samples_; }
    long block_count() const { return block_count_; }
    long block_length() const { return block_length_; }
    long last_start() const { return last_start_; }
    double noise_power() const { return noise_power_; }
    int element_count() const { return element_count_; }

    Candidate& candidate(long block, int nid2) { return cand_[block * nr::kNid2Count + nid2]; }
    const Candidate& candidate(long block, int nid2) const {
        return cand_[block * nr::kNid2Count + nid2];
    }
    float* sss_energy(long block, int nid2) {
        return sss_.data() + (block * nr::kNid2Count + nid2) * nr::kNid1Count;
    }
    const float* sss_energy(long block, int nid2) const {
        return sss_.data() + (block * nr::kNid2Count + nid2) * nr::kNid1Count;
    }

private:
    long capture_samples_ = 0;
    long block_count_ = 0;
    long block_length_ = 0;
    long last_start_ = -1;
    int element_count_ = 0;
    double noise_power_ = 1.0;
    std::vector<Candidate> cand_;
    std::vector<float> sss_;
};

/// Runs the exhaustive sample-by-subcarrier search over the whole capture.
CorrelatorMap build_correlator_map(const CaptureWindow& capture, const nr::OfdmParams& ofdm = {});
/// Recomputes only the blocks whose search windows touch samples in
/// [first_sample, last_sample]. The map must match the capture's shape.
void refresh_correlator_map(CorrelatorMap& map, const CaptureWindow& capture, long first_sample,
                            long last_sample, const nr::OfdmParams& ofdm = {});

/// Max over all blocks and cell id hypotheses of the fused statistic.
DetectorStatistic corr_statistic(const CorrelatorMap& map, const CorrelatorConfig& config = {});
/// Same search restricted to one cell id.
DetectorStatistic ue_statistic(const CorrelatorMap& map, nr::PhysCellId pci,
                               const CorrelatorConfig& config = {});

DetectorStatistic corr_detect(const CaptureWindow& capture, const CorrelatorConfig& config = {},
                              const nr::OfdmParams& ofdm = {});
DetectorStatistic ue_detect(const CaptureWindow& capture, nr::PhysCellId pci,
                            const CorrelatorConfig& config = {}, const nr::OfdmParams& ofdm = {});

/// Unit-energy time-domain PSS template for a zero frequency shift.
std::vector<std::complex<double>> pss_template(int nid2, const nr::OfdmParams& ofdm = {});

/// Mean per-RE power over the SSS resource elements, in dBm (inputs in sqrt mW).
double rsrp_dbm(std::span<const std::complex<double>> sss_res);

struct RocPoint {
    double threshold = 0.0;
    double pfa = 0.0;
    double pd = 0.0;
};

struct RocCurve {
    /// Ordered by decreasing threshold, i.e. non-decreasing pfa and pd.
    std::vector<RocPoint> points;
};

RocPoint evaluate_threshold(std::span<const double> h1, std::span<const double> h0,
                            double threshold);
RocCurve roc_from_stats(std::span<const double> h1, std::span<const double> h0);
/// pd at the largest threshold with pfa <= target, interpolated linearly
/// towards the next curve point.
double pd_at_pfa(const RocCurve& roc, double target_pfa = 0.10);
/// Threshold with a fraction <= target of h0 strictly above it.
double threshold_at_pfa(std::span<const double> h0, double target_pfa);

}  // namespace lpd::detect
