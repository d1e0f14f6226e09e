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

#include "lpd/bundle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lpd/config.hpp"

namespace lpd::bundle {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw BundleError("cannot write " + p.string());
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw BundleError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json pd_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_roc(const detect::RocCurve& roc) {
    std::string s = "threshold\tpfa\tpd\n";
    for (const auto& p : roc.points) s += num(p.threshold) + "\t" + num(p.pfa) + "\t" + num(p.pd) + "\n";
    return s;
}

std::string format_distance_table(const std::vector<exp::DistanceRow>& rows) {
    std::string s = "arm\tbin_lo_m\tbin_hi_m\ttrials\tpd_eve_energy\tpd_eve_corr\tlow_confidence\n";
    for (const auto& r : rows) {
        s += access::to_string(r.arm) + "\t" + num(r.lo_m) + "\t" + num(r.hi_m) + "\t" +
             std::to_string(r.trials) + "\t" + (r.pd_energy ? num(*r.pd_energy) : "NA") + "\t" +
             (r.pd_corr ? num(*r.pd_corr) : "NA") + "\t" + (r.low_confidence ? "1" : "0") + "\n";
    }
    return s;
}

std::string trial_to_json(const exp::TrialRecord& t) {
    json j{{"drop", t.drop},
           {"realization", t.realization},
           {"arm", access::to_string(t.arm)},
           {"ue_stat", t.ue_stat},
           {"eve_energy_stat", t.eve_energy_stat},
           {"eve_corr_stat", t.eve_corr_stat},
           {"ue_stat_h0", t.ue_stat_h0},
           {"eve_energy_stat_h0", t.eve_energy_stat_h0},
           {"eve_corr_stat_h0", t.eve_corr_stat_h0},
           {"eve_distance_m", t.eve_distance_m},
           {"ue_distance_m", t.ue_distance_m},
           {"eve_los", t.eve_los},
           {"ue_los", t.ue_los},
           {"sector", t.sector},
           {"beam_id", t.beam_id},
           {"p_tx_dbm", t.p_tx_dbm},
           {"gamma_db", t.gamma_db},
           {"ue_snr_db", t.ue_snr_db},
           {"transmissions", t.transmissions}};
    return j.dump();
}

exp::TrialRecord trial_from_json(const std::string& line) {
    const auto j = json::parse(line);
    exp::TrialRecord t;
    t.drop = j.at("drop").get<long>();
    t.realization = j.at("realization").get<long>();
    t.arm = access::parse_scenario(j.at("arm").get<std::string>());
    t.ue_stat = j.at("ue_stat").get<double>();
    t.eve_energy_stat = j.at("eve_energy_stat").get<double>();
    t.eve_corr_stat = j.at("eve_corr_stat").get<double>();
    t.ue_stat_h0 = j.at("ue_stat_h0").get<double>();
    t.eve_energy_stat_h0 = j.at("eve_energy_stat_h0").get<double>();
    t.eve_corr_stat_h0 = j.at("eve_corr_stat_h0").get<double>();
    t.eve_distance_m = j.at("eve_distance_m").get<double>();
    t.ue_distance_m = j.at("ue_distance_m").get<double>();
    t.eve_los = j.at("eve_los").get<bool>();
    t.ue_los = j.at("ue_los").get<bool>();
    t.sector = j.at("sector").get<int>();
    t.beam_id = j.at("beam_id").get<int>();
    t.p_tx_dbm = j.at("p_tx_dbm").get<double>();
    t.gamma_db = j.at("gamma_db").get<double>();
    t.ue_snr_db = j.at("ue_snr_db").get<double>();
    t.transmissions = j.at("transmissions").get<int>();
    return t;
}

void write_bundle(const exp::CampaignResults& res, const fs::path& dir) {
    const fs::path stage = dir.string() + ".partial";
    std::error_code ec;
    fs::remove_all(stage, ec);
    fs::create_directories(stage, ec);
    if (ec) throw BundleError("cannot create " + stage.string() + ": " + ec.message());

    write_file(stage / "config.json", cfg::emit_config(res.config));
    std::string lines;
    for (const auto& t : res.trials) lines += trial_to_json(t) + "\n";
    write_file(stage / "trials.jsonl", lines);
    for (const auto& r : res.rocs)
        for (auto d : exp::kDetectors)
            write_file(stage / ("roc_" + access::to_string(r.arm) + "_" + exp::to_string(d) + ".tsv"),
                       format_roc(r.curve(d)));
    write_file(stage / "distance_pd.tsv", format_distance_table(res.distance_table));

    json arms = json::object();
    for (const auto& s : res.summary)
        arms[access::to_string(s.arm)] = {{"trials", s.trials},
                                          {"pd_ue", s.pd_ue},
                                          {"pd_eve_energy", s.pd_eve_energy},
                                          {"pd_eve_corr", s.pd_eve_corr}};
    json dist = json::array();
    for (const auto& r : res.distance_table)
        dist.push_back({{"arm", access::to_string(r.arm)},
                        {"bin_lo_m", r.lo_m},
                        {"bin_hi_m", r.hi_m},
                        {"trials", r.trials},
                        {"pd_eve_energy", pd_or_null(r.pd_energy)},
                        {"pd_eve_corr", pd_or_null(r.pd_corr)},
                        {"low_confidence", r.low_confidence}});
    const json summary{{"version", cfg::version()},
                       {"seed", res.config.seed},
                       {"pfa", res.pfa},
                       {"trials", res.trials.size()},
                       {"arms", arms},
                       {"eve_corr_pd_reduction", pd_or_null(res.eve_corr_pd_reduction)},
                       {"distance", dist}};
    write_file(stage / "summary.json", summary.dump(2) + "\n");

    fs::remove_all(dir, ec);
    fs::rename(stage, dir, ec);
    if (ec) throw BundleError("cannot move bundle into " + dir.string() + ": " + ec.message());
}

Bundle read_bundle(const fs::path& dir) {
    Bundle b;
    const auto cfg_path = dir / "config.json";
    try {
        b.config = cfg::parse_config(read_file(cfg_path));
    } catch (const cfg::ConfigError& e) {
        throw BundleError(cfg_path.string() + ": " + e.what());
    }
    const auto trials_path = dir / "trials.jsonl";
    std::istringstream in(read_file(trials_path));
    std::string line;
    long n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            b.trials.push_back(trial_from_json(line));
        } catch (const std::exception& e) {
            throw BundleError(trials_path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    if (b.trials.empty()) throw BundleError(trials_path.string() + ": no trial records");
    return b;
}

std::string report_text(const exp::CampaignResults& res) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "trials: %zu   pfa: %.4g\n", res.trials.size(), res.pfa);
    os << buf;
    os << "arm        detector     pd\n";
    for (const auto& s : res.summary) {
        const auto arm = access::to_string(s.arm);
        for (auto d : exp::kDetectors) {
            const double pd = d == exp::Detector::Ue          ? s.pd_ue
                              : d == exp::Detector::EveEnergy ? s.pd_eve_energy
                                                              : s.pd_eve_corr;
            std::snprintf(buf, sizeof buf, "%-10s %-12s %.4f\n", arm.c_str(),
                          exp::to_string(d).c_str(), pd);
            os << buf;
        }
    }
    if (res.eve_corr_pd_reduction) {
        const auto* base = res.arm_summary(access::ScenarioKind::Baseline);
        const double abs_pp = 100.0 * *res.eve_corr_pd_reduction;
        const double rel = base->pd_eve_corr > 0 ? 100.0 * *res.eve_corr_pd_reduction / base->pd_eve_corr
                                                 : 0.0;
        std::snprintf(buf, sizeof buf,
                      "eve corr pd reduction: %.1f%% relative (%.1f percentage points)\n", rel, abs_pp);
        os << buf;
    }
    os << "distance bins (eve pd):\n" << format_distance_table(res.distance_table);
    return os.str();
}

std::vector<std::pair<double, double>> plot_points(const detect::RocCurve& roc) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : roc.points) {
        if (!pts.empty() && pts.back().first == p.pfa)
            pts.back().second = std::max(pts.back().second, p.pd);
        else
            pts.emplace_back(p.pfa, p.pd);
    }
    return pts;
}

std::vector<fs::path> write_plot_files(const exp::CampaignResults& res, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw BundleError("cannot create " + dir.string() + ": " + ec.message());
    std::vector<fs::path> out;
    for (const auto& r : res.rocs) {
        for (auto d : exp::kDetectors) {
            const auto p = dir / ("roc_" + access::to_string(r.arm) + "_" + exp::to_string(d) + ".dat");
            std::string s = "# pfa pd\n";
            for (const auto& [pfa, pd] : plot_points(r.curve(d))) s += num(pfa) + " " + num(pd) + "\n";
            write_file(p, s);
            out.push_back(p);
        }
    }
    return out;
}

}  // namespace lpd::bundle
