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

#include "lpd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lpd::exp {

namespace {

enum Purpose : std::uint32_t {
    kGeometry = 1,
    kChannelUe = 2,
    kChannelEve = 3,
    kNoise = 4,
    kNoiseH1 = 5,
    kPbch = 6,
    kCellId = 7,
    kBaselineCell = 8,
};

std::uint32_t arm_index(ScenarioKind k) { return k == ScenarioKind::Baseline ? 0U : 1U; }

Rng stream(const CampaignConfig& c, long drop, long realization, std::uint32_t arm,
           Purpose purpose) {
    return Rng(c.seed, {static_cast<std::uint32_t>(drop), static_cast<std::uint32_t>(realization),
                        arm, purpose});
}

detect::CaptureWindow noise_capture(Rng rng, int elements, long samples, double rate) {
    detect::CaptureWindow cap;
    cap.noise_power = 1.0;
    cap.sample_rate_hz = rate;
    cap.elements.resize(elements);
    for (auto& e : cap.elements) {
        e.resize(samples);
        for (auto& x : e) {
            const auto z = rng.complex_normal(1.0);
            x = {static_cast<float>(z.real()), static_cast<float>(z.imag())};
        }
    }
    return cap;
}

struct Segment {
    std::vector<nr::cd> samples;
    long start = 0;
    int burst_position = 0;
    int period = 0;
};

// Modulated SSB of every (period, burst position) a plan occupies, unit per-RE power.
std::vector<Segment> plan_segments(const CampaignConfig& c, const access::TxPlan& plan, Rng& pbch,
                                   long window) {
    const auto& ofdm = c.phy.ofdm;
    const int periods = static_cast<int>(std::ceil(c.phy.window_s / c.phy.period_s - 1e-12));
    std::vector<int> positions;
    for (const auto& e : plan.entries) positions.push_back(e.burst_position);
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());

    std::vector<Segment> segs;
    for (int p = 0; p < periods; ++p) {
        const nr::PhysCellId pci = plan.pci_per_period.empty()
                                       ? plan.entries.front().pci
                                       : plan.pci_per_period[std::min<std::size_t>(
                                             p, plan.pci_per_period.size() - 1)];
        for (int pos : positions) {
            const auto filler = nr::gen_pbch_placeholder(pbch);
            const long start = nr::ssb_start_sample(ofdm, pos, p, c.phy.period_s);
            if (start >= window) continue;
            const auto grid = nr::assemble_ssb_grid(pci, filler);
            segs.push_back({nr::ofdm_modulate(grid, ofdm, c.access.freq_offset_prb, 0).samples,
                            start, pos, p});
        }
    }
    return segs;
}

struct Interval {
    long lo;
    long hi;
};

// Adds every scheduled transmission seen through `channel` to the capture and
// returns the touched sample intervals (merged).
std::vector<Interval> add_plan(detect::CaptureWindow& cap, const access::TxPlan& plan, const std::vector<Segment>& segs,
                               const prop::ChannelRealization& channel,
                               const std::vector<prop::Beam>& codebook, double noise_dbm) {
    std::vector<Interval> touched;
    const double ls = channel.large_scale_gain_db();
    for (const auto& e : plan.entries) {
        const double amp_db = e.power_dbm - 10.0 * std::log10(static_cast<double>(nr::kSsbSubcarriers)) +
                              ls - noise_dbm;
        const double amp = std::pow(10.0, amp_db / 20.0);
        for (const auto& s : segs) {
            if (s.burst_position != e.burst_position) continue;
            prop::accumulate_channel<float>(s.samples, s.start, channel, codebook.at(e.beam_id), amp,
                                            cap.elements);
            touched.push_back({s.start, s.start + static_cast<long>(s.samples.size()) +
                                            channel.max_delay_samples() - 1});
        }
    }
    std::sort(touched.begin(), touched.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& t : touched) {
        if (!merged.empty() && t.lo <= merged.back().hi + 1)
            merged.back().hi = std::max(merged.back().hi, t.hi);
        else
            merged.push_back(t);
    }
    const long last = cap.samples() - 1;
    for (auto& m : merged) m.hi = std::min(m.hi, last);
    return merged;
}

struct ReceiverStats {
    double energy = 0.0;
    detect::CorrelatorMap map;
};

ReceiverStats receive(const detect::CaptureWindow& noise, const detect::CorrelatorMap& noise_map,
                      const CampaignConfig& c, const access::TxPlan& plan,
                      const std::vector<Segment>& segs, const prop::ChannelRealization& channel,
                      const std::vector<prop::Beam>& codebook, double noise_dbm, bool silent) {
    ReceiverStats r;
    if (silent) {
        r.energy = detect::energy_detect(noise, c.detection.window, c.phy.ofdm).value;
        r.map = noise_map;
        return r;
    }
    auto cap = noise;
    const auto touched = add_plan(cap, plan, segs, channel, codebook, noise_dbm);
    r.energy = detect::energy_detect(cap, c.detection.window, c.phy.ofdm).value;
    r.map = noise_map;
    for (const auto& t : touched) detect::refresh_correlator_map(r.map, cap, t.lo, t.hi, c.phy.ofdm);
    return r;
}

double ue_stat(const detect::CorrelatorMap& map, const access::TxPlan& plan,
               const detect::CorrelatorConfig& cc) {
    if (plan.kind == ScenarioKind::Baseline) return detect::corr_statistic(map, cc).value;
    double best = 0.0;
    for (const auto& pci : plan.pci_per_period)
        best = std::max(best, detect::ue_statistic(map, pci, cc).value);
    return best;
}

}  // namespace

std::vector<double> DetectionConfig::distance_edges() const {
    std::vector<double> e(distance_bins + 1);
    for (int i = 0; i <= distance_bins; ++i)
        e[i] = distance_min_m + (distance_max_m - distance_min_m) * i / distance_bins;
    return e;
}

void CampaignConfig::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    need(n_drops >= 1, "campaign.n_drops must be >= 1");
    need(n_realizations >= 1, "campaign.n_realizations must be >= 1");
    need(n_drops <= 0xFFFFFFFFL && n_realizations <= 0xFFFFL,
         "campaign.n_drops/n_realizations exceed the RNG stream layout");
    need(!arms.empty(), "campaign.arms must not be empty");
    need(workers >= 0, "campaign.workers must be >= 0");
    need(phy.ofdm.fft_size == 512 && phy.ofdm.cp_samples > 0 && phy.ofdm.cp_samples < 512,
         "phy: only the 512-point numerology is supported");
    need(phy.window_s > 0 && phy.period_s > 0, "phy.window_s and phy.period_s must be positive");
    need(propagation.geometry.isd_m > 0, "propagation.isd_m must be positive");
    need(propagation.geometry.sector_count >= 1, "propagation.sector_count must be >= 1");
    need(propagation.ue_array.element_count() >= 1 && propagation.gnb_array.element_count() >= 1,
         "propagation: arrays need at least one element");
    need(propagation.channel.cluster_count >= 1, "propagation.cluster_count must be >= 1");
    need(access.beams_per_sector >= 1, "access.beams_per_sector must be >= 1");
    need(access.freq_offset_prb >= 0 && 12 * access.freq_offset_prb + 240 <= phy.ofdm.fft_size,
         "access.freq_offset_prb places the SSB outside the band");
    need(access.baseline_cell_id < nr::kCellIdCount, "access.baseline_cell_id out of range");
    need(access.beams_per_sector <= 8, "access.beams_per_sector exceeds the 8 burst positions");
    need(detection.pfa >= 0 && detection.pfa <= 1, "detection.pfa must lie in [0, 1]");
    need(detection.distance_bins >= 1 && detection.distance_max_m > detection.distance_min_m,
         "detection: invalid distance bins");
}

std::string to_string(Detector d) {
    switch (d) {
        case Detector::Ue: return "ue";
        case Detector::EveEnergy: return "eve_energy";
        case Detector::EveCorr: return "eve_corr";
    }
    return "?";
}

double TrialRecord::h1(Detector d) const {
    return d == Detector::Ue ? ue_stat : d == Detector::EveEnergy ? eve_energy_stat : eve_corr_stat;
}

double TrialRecord::h0(Detector d) const {
    return d == Detector::Ue ? ue_stat_h0
           : d == Detector::EveEnergy ? eve_energy_stat_h0
                                      : eve_corr_stat_h0;
}

const detect::RocCurve& ArmRocs::curve(Detector d) const {
    return d == Detector::Ue ? ue : d == Detector::EveEnergy ? eve_energy : eve_corr;
}

const ArmRocs* CampaignResults::arm(ScenarioKind kind) const {
    for (const auto& r : rocs)
        if (r.arm == kind) return &r;
    return nullptr;
}

const ArmSummary* CampaignResults::arm_summary(ScenarioKind kind) const {
    for (const auto& s : summary)
        if (s.arm == kind) return &s;
    return nullptr;
}

nr::PhysCellId baseline_cell_id(const CampaignConfig& config) {
    if (config.access.baseline_cell_id >= 0)
        return nr::PhysCellId::from_cell_id(config.access.baseline_cell_id);
    Rng rng(config.seed, {0xFFFFFFFFU, 0, 0, kBaselineCell});
    return nr::PhysCellId::from_cell_id(static_cast<int>(rng.uniform_int(nr::kCellIdCount)));
}

double sample_noise_dbm(const CampaignConfig& config) {
    return prop::thermal_noise_dbm(config.phy.ofdm.scs_hz, config.propagation.noise_figure_db);
}

double ssb_band_noise_dbm(const CampaignConfig& config) {
    return prop::thermal_noise_dbm(nr::kSsbSubcarriers * config.phy.ofdm.scs_hz,
                                   config.propagation.noise_figure_db);
}

std::vector<TrialRecord> run_pair(const CampaignConfig& c, long drop, long realization,
                                  const std::vector<ScenarioKind>& arms) {
    const auto& ofdm = c.phy.ofdm;
    const auto& pc = c.propagation;
    const long window = std::lround(c.phy.window_s * ofdm.sample_rate_hz());
    const int elements = pc.ue_array.element_count();
    const double noise_dbm = sample_noise_dbm(c);
    const auto codebook = prop::dft_codebook(pc.gnb_array, pc.geometry, c.access.beams_per_sector);

    auto geo = stream(c, drop, 0, 0, kGeometry);
    const auto d = prop::sample_drop(geo, pc.geometry, pc.fc_ghz);
    auto rue = stream(c, drop, realization, 0, kChannelUe);
    const auto ue_ch =
        prop::gen_channel(rue, d.ue_link, pc.gnb_array, pc.ue_array, pc.geometry, ofdm, pc.channel);
    auto reve = stream(c, drop, realization, 0, kChannelEve);
    const auto eve_ch =
        prop::gen_channel(reve, d.eve_link, pc.gnb_array, pc.ue_array, pc.geometry, ofdm, pc.channel);

    const auto h0 = noise_capture(stream(c, drop, realization, 0, kNoise), elements, window,
                                  ofdm.sample_rate_hz());
    const double energy_h0 = detect::energy_detect(h0, c.detection.window, ofdm).value;
    const auto map_h0 = detect::build_correlator_map(h0, ofdm);
    const double corr_h0 = detect::corr_statistic(map_h0, c.detection.correlator).value;

    // gNB-silent runs compare two independent noise captures.
    std::optional<detect::CaptureWindow> h1_noise;
    std::optional<detect::CorrelatorMap> h1_map;
    if (c.gnb_silent) {
        h1_noise = noise_capture(stream(c, drop, realization, 0, kNoiseH1), elements, window,
                                 ofdm.sample_rate_hz());
        h1_map = detect::build_correlator_map(*h1_noise, ofdm);
    }
    const auto& base_noise = c.gnb_silent ? *h1_noise : h0;
    const auto& base_map = c.gnb_silent ? *h1_map : map_h0;

    const auto genie =
        access::genie_beam_select(ue_ch, codebook, ofdm, c.access.freq_offset_prb);
    const double eta = ssb_band_noise_dbm(c);

    std::vector<TrialRecord> out;
    for (const auto arm : arms) {
        access::TxPlan plan;
        if (arm == ScenarioKind::Baseline) {
            plan = access::baseline_schedule(baseline_cell_id(c), c.access, pc.geometry.sector_count);
        } else {
            const double p = access::power_control({eta, genie.gamma_db, c.access.s_target_db},
                                                   access::PowerLimits::from(c.access));
            auto rpci = stream(c, drop, realization, arm_index(arm), kCellId);
            const int periods = static_cast<int>(std::ceil(c.phy.window_s / c.phy.period_s - 1e-12));
            plan = access::proposed_schedule(rpci, genie, p, c.access, periods);
        }
        auto rpbch = stream(c, drop, realization, arm_index(arm), kPbch);
        const auto segs = plan_segments(c, plan, rpbch, window);

        const auto ue_rx = receive(base_noise, base_map, c, plan, segs, ue_ch, codebook, noise_dbm,
                                   c.gnb_silent);
        const auto eve_rx = receive(base_noise, base_map, c, plan, segs, eve_ch, codebook,
                                    noise_dbm, c.gnb_silent);

        TrialRecord t;
        t.drop = drop;
        t.realization = realization;
        t.arm = arm;
        t.ue_stat = ue_stat(ue_rx.map, plan, c.detection.correlator);
        t.eve_energy_stat = eve_rx.energy;
        t.eve_corr_stat = detect::corr_statistic(eve_rx.map, c.detection.correlator).value;
        t.ue_stat_h0 = ue_stat(map_h0, plan, c.detection.correlator);
        t.eve_energy_stat_h0 = energy_h0;
        t.eve_corr_stat_h0 = corr_h0;
        t.eve_distance_m = d.eve_link.d2d_m;
        t.ue_distance_m = d.ue_link.d2d_m;
        t.eve_los = d.eve_link.los;
        t.ue_los = d.ue_link.los;
        t.transmissions = static_cast<int>(plan.entries.size());
        if (arm == ScenarioKind::Proposed) {
            t.sector = genie.sector;
            t.beam_id = genie.beam_id;
            t.p_tx_dbm = plan.entries.front().power_dbm;
            t.gamma_db = genie.gamma_db;
        } else {
            t.sector = -1;
            t.beam_id = -1;
            t.p_tx_dbm = c.access.baseline_power_dbm;
            t.gamma_db = genie.gamma_db;
        }
        t.ue_snr_db = t.p_tx_dbm + genie.gamma_db - eta;
        out.push_back(t);
    }
    return out;
}

TrialRecord run_trial(const CampaignConfig& config, long drop, long realization,
                      ScenarioKind scenario) {
    return run_pair(config, drop, realization, {scenario}).front();
}

CampaignResults run_campaign(const CampaignConfig& config, const ProgressFn& progress) {
    config.validate();
    const long pairs = config.n_drops * config.n_realizations;
    int workers = config.workers > 0 ? config.workers
                                     : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    workers = static_cast<int>(std::min<long>(workers, pairs));

    std::vector<std::vector<TrialRecord>> slots(pairs);
    std::atomic<long> next{0};
    std::atomic<long> done{0};
    std::mutex mu;
    std::exception_ptr failure;

    auto work = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= pairs) return;
            try {
                slots[i] = run_pair(config, i / config.n_realizations, i % config.n_realizations,
                                    config.arms);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next.store(pairs);
                return;
            }
            const long n = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(mu);
                progress(n, pairs);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<TrialRecord> trials;
    trials.reserve(pairs * config.arms.size());
    for (auto& s : slots)
        for (auto& t : s) trials.push_back(t);
    return summarize(config, std::move(trials), config.detection.pfa);
}

std::vector<DistanceRow> distance_binned_pd(const std::vector<TrialRecord>& trials,
                                            ScenarioKind arm, double pfa,
                                            const std::vector<double>& edges, int min_trials) {
    if (edges.size() < 2) throw std::domain_error("need at least one distance bin");
    std::vector<double> h0e, h0c;
    for (const auto& t : trials)
        if (t.arm == arm) {
            h0e.push_back(t.eve_energy_stat_h0);
            h0c.push_back(t.eve_corr_stat_h0);
        }
    std::vector<DistanceRow> rows;
    if (h0e.empty()) return rows;
    const double te = detect::threshold_at_pfa(h0e, pfa);
    const double tc = detect::threshold_at_pfa(h0c, pfa);
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        DistanceRow r;
        r.lo_m = edges[b];
        r.hi_m = edges[b + 1];
        r.arm = arm;
        long he = 0, hc = 0;
        const bool last = b + 2 == edges.size();
        for (const auto& t : trials) {
            if (t.arm != arm) continue;
            const double x = t.eve_distance_m;
            if (x < r.lo_m || (last ? x > r.hi_m : x >= r.hi_m)) continue;
            ++r.trials;
            he += t.eve_energy_stat > te;
            hc += t.eve_corr_stat > tc;
        }
        if (r.trials > 0) {
            r.pd_energy = static_cast<double>(he) / r.trials;
            r.pd_corr = static_cast<double>(hc) / r.trials;
        }
        r.low_confidence = r.trials < min_trials;
        rows.push_back(r);
    }
    return rows;
}

CampaignResults summarize(const CampaignConfig& config, std::vector<TrialRecord> trials,
                          double pfa) {
    CampaignResults res;
    res.config = config;
    res.pfa = pfa;
    res.trials = std::move(trials);
    const auto edges = config.detection.distance_edges();
    for (const auto arm : config.arms) {
        std::vector<double> h1[3], h0[3];
        for (const auto& t : res.trials) {
            if (t.arm != arm) continue;
            for (int k = 0; k < 3; ++k) {
                h1[k].push_back(t.h1(kDetectors[k]));
                h0[k].push_back(t.h0(kDetectors[k]));
            }
        }
        if (h1[0].empty()) continue;
        ArmRocs r;
        r.arm = arm;
        r.ue = detect::roc_from_stats(h1[0], h0[0]);
        r.eve_energy = detect::roc_from_stats(h1[1], h0[1]);
        r.eve_corr = detect::roc_from_stats(h1[2], h0[2]);
        ArmSummary s;
        s.arm = arm;
        s.pd_ue = detect::pd_at_pfa(r.ue, pfa);
        s.pd_eve_energy = detect::pd_at_pfa(r.eve_energy, pfa);
        s.pd_eve_corr = detect::pd_at_pfa(r.eve_corr, pfa);
        s.trials = static_cast<long>(h1[0].size());
        res.rocs.push_back(std::move(r));
        res.summary.push_back(s);
        auto rows = distance_binned_pd(res.trials, arm, pfa, edges, config.detection.min_bin_trials);
        res.distance_table.insert(res.distance_table.end(), rows.begin(), rows.end());
    }
    const auto* b = res.arm_summary(ScenarioKind::Baseline);
    const auto* p = res.arm_summary(ScenarioKind::Proposed);
    if (b && p) res.eve_corr_pd_reduction = b->pd_eve_corr - p->pd_eve_corr;
    return res;
}

}  // namespace lpd::exp
