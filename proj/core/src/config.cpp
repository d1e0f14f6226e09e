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

#include "lpd/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef LPD_VERSION
#define LPD_VERSION "0.0.0"
#endif

namespace lpd::cfg {

using json = nlohmann::ordered_json;
using exp::CampaignConfig;

const char* version() { return LPD_VERSION; }

namespace {

json array_json(const prop::UpaConfig& a) {
    return {{"rows", a.rows}, {"cols", a.cols}, {"polarizations", a.polarizations},
            {"spacing_wl", a.spacing_wl}};
}

prop::UpaConfig array_from(const json& j) {
    return {j.at("rows").get<int>(), j.at("cols").get<int>(), j.at("polarizations").get<int>(),
            j.at("spacing_wl").get<double>()};
}

json to_json(const CampaignConfig& c) {
    json arms = json::array();
    for (auto a : c.arms) arms.push_back(access::to_string(a));
    const auto& p = c.propagation;
    const auto& d = c.detection;
    return {
        {"campaign",
         {{"n_drops", c.n_drops},
          {"n_realizations", c.n_realizations},
          {"arms", arms},
          {"seed", c.seed},
          {"workers", c.workers},
          {"gnb_silent", c.gnb_silent}}},
        {"phy",
         {{"scs_hz", c.phy.ofdm.scs_hz},
          {"fft_size", c.phy.ofdm.fft_size},
          {"cp_samples", c.phy.ofdm.cp_samples},
          {"sample_rate_hz", c.phy.ofdm.sample_rate_hz()},
          {"window_s", c.phy.window_s},
          {"period_s", c.phy.period_s}}},
        {"propagation",
         {{"isd_m", p.geometry.isd_m},
          {"sector_count", p.geometry.sector_count},
          {"gnb_height_m", p.geometry.gnb_height_m},
          {"ue_height_m", p.geometry.ue_height_m},
          {"min_d2d_m", p.geometry.min_d2d_m},
          {"fc_ghz", p.fc_ghz},
          {"noise_figure_db", p.noise_figure_db},
          {"gnb_array", array_json(p.gnb_array)},
          {"ue_array", array_json(p.ue_array)},
          {"cluster_count", p.channel.cluster_count},
          {"ricean_k_db", p.channel.ricean_k_db},
          {"delay_spread_ns", p.channel.delay_spread_ns},
          {"az_spread_deg", p.channel.az_spread_deg},
          {"el_spread_deg", p.channel.el_spread_deg},
          {"element_pattern", p.channel.element_pattern}}},
        {"access",
         {{"beams_per_sector", c.access.beams_per_sector},
          {"baseline_power_dbm", c.access.baseline_power_dbm},
          {"s_target_db", c.access.s_target_db},
          {"power_cap", c.access.power_cap},
          {"power_cap_dbm", c.access.power_cap_dbm},
          {"power_floor_dbm", c.access.power_floor_dbm},
          {"aux_tx_power_dbm", c.access.aux_tx_power_dbm},
          {"freq_offset_prb", c.access.freq_offset_prb},
          {"baseline_cell_id", c.access.baseline_cell_id}}},
        {"detection",
         {{"freq_width_sc", d.window.freq_width_sc},
          {"time_width_symbols", d.window.time_width_symbols},
          {"freq_step_sc", d.window.freq_step_sc},
          {"time_step_samples", d.window.time_step_samples},
          {"pss_only", d.correlator.pss_only},
          {"pfa", d.pfa},
          {"distance_bins", d.distance_bins},
          {"distance_min_m", d.distance_min_m},
          {"distance_max_m", d.distance_max_m},
          {"min_bin_trials", d.min_bin_trials}}},
    };
}

CampaignConfig from_json(const json& j) {
    CampaignConfig c;
    const auto& cj = j.at("campaign");
    c.n_drops = cj.at("n_drops").get<long>();
    c.n_realizations = cj.at("n_realizations").get<long>();
    c.arms.clear();
    for (const auto& a : cj.at("arms")) {
        try {
            c.arms.push_back(access::parse_scenario(a.get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("campaign.arms: ") + e.what());
        }
    }
    c.seed = cj.at("seed").get<std::uint64_t>();
    c.workers = cj.at("workers").get<int>();
    c.gnb_silent = cj.at("gnb_silent").get<bool>();

    const auto& pj = j.at("phy");
    c.phy.ofdm.scs_hz = pj.at("scs_hz").get<double>();
    c.phy.ofdm.fft_size = pj.at("fft_size").get<int>();
    c.phy.ofdm.cp_samples = pj.at("cp_samples").get<int>();
    const double fs = pj.at("sample_rate_hz").get<double>();
    if (std::abs(fs - c.phy.ofdm.sample_rate_hz()) > 1e-6 * fs)
        throw ConfigError("phy.sample_rate_hz must equal scs_hz * fft_size");
    c.phy.window_s = pj.at("window_s").get<double>();
    c.phy.period_s = pj.at("period_s").get<double>();

    const auto& rj = j.at("propagation");
    auto& p = c.propagation;
    p.geometry.isd_m = rj.at("isd_m").get<double>();
    p.geometry.sector_count = rj.at("sector_count").get<int>();
    p.geometry.sector_width_deg = 360.0 / std::max(1, p.geometry.sector_count);
    p.geometry.gnb_height_m = rj.at("gnb_height_m").get<double>();
    p.geometry.ue_height_m = rj.at("ue_height_m").get<double>();
    p.geometry.min_d2d_m = rj.at("min_d2d_m").get<double>();
    p.fc_ghz = rj.at("fc_ghz").get<double>();
    p.noise_figure_db = rj.at("noise_figure_db").get<double>();
    p.gnb_array = array_from(rj.at("gnb_array"));
    p.ue_array = array_from(rj.at("ue_array"));
    p.channel.cluster_count = rj.at("cluster_count").get<int>();
    p.channel.ricean_k_db = rj.at("ricean_k_db").get<double>();
    p.channel.delay_spread_ns = rj.at("delay_spread_ns").get<double>();
    p.channel.az_spread_deg = rj.at("az_spread_deg").get<double>();
    p.channel.el_spread_deg = rj.at("el_spread_deg").get<double>();
    p.channel.element_pattern = rj.at("element_pattern").get<bool>();

    const auto& aj = j.at("access");
    c.access.beams_per_sector = aj.at("beams_per_sector").get<int>();
    c.access.baseline_power_dbm = aj.at("baseline_power_dbm").get<double>();
    c.access.s_target_db = aj.at("s_target_db").get<double>();
    c.access.power_cap = aj.at("power_cap").get<bool>();
    c.access.power_cap_dbm = aj.at("power_cap_dbm").get<double>();
    c.access.power_floor_dbm = aj.at("power_floor_dbm").get<double>();
    c.access.aux_tx_power_dbm = aj.at("aux_tx_power_dbm").get<double>();
    c.access.freq_offset_prb = aj.at("freq_offset_prb").get<int>();
    c.access.baseline_cell_id = aj.at("baseline_cell_id").get<int>();

    const auto& dj = j.at("detection");
    auto& d = c.detection;
    d.window.freq_width_sc = dj.at("freq_width_sc").get<int>();
    d.window.time_width_symbols = dj.at("time_width_symbols").get<int>();
    d.window.freq_step_sc = dj.at("freq_step_sc").get<int>();
    d.window.time_step_samples = dj.at("time_step_samples").get<int>();
    d.correlator.pss_only = dj.at("pss_only").get<bool>();
    d.pfa = dj.at("pfa").get<double>();
    d.distance_bins = dj.at("distance_bins").get<int>();
    d.distance_min_m = dj.at("distance_min_m").get<double>();
    d.distance_max_m = dj.at("distance_max_m").get<double>();
    d.min_bin_trials = dj.at("min_bin_trials").get<int>();
    return c;
}

bool same_kind(const json& a, const json& b) {
    if (a.is_number() && b.is_number()) {
        if (a.is_number_integer() && !b.is_number_integer()) return false;
        return true;
    }
    return a.type() == b.type();
}

// Copies `src` into `dst`, refusing keys or value types the defaults lack.
void merge_strict(json& dst, const json& src, const std::string& where) {
    if (!src.is_object()) throw ConfigError(where.empty() ? "document must be a JSON object"
                                                          : "'" + where + "' must be an object");
    for (auto it = src.begin(); it != src.end(); ++it) {
        const std::string path = where.empty() ? it.key() : where + "." + it.key();
        if (!dst.contains(it.key())) throw ConfigError("unknown key '" + path + "'");
        auto& slot = dst[it.key()];
        if (slot.is_object()) {
            merge_strict(slot, it.value(), path);
        } else {
            if (!same_kind(slot, it.value()))
                throw ConfigError("wrong type for '" + path + "': expected " +
                                  std::string(slot.type_name()));
            slot = it.value();
        }
    }
}

void collect_leaves(const json& j, const std::string& prefix, std::vector<std::string>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it.value().is_object())
            collect_leaves(it.value(), path, out);
        else
            out.push_back(path);
    }
}

std::string resolve_key(const json& defaults, const std::string& key) {
    std::vector<std::string> leaves;
    collect_leaves(defaults, "", leaves);
    std::vector<std::string> hits;
    for (const auto& l : leaves) {
        if (l == key) return l;
        if (l.size() > key.size() && l.compare(l.size() - key.size(), key.size(), key) == 0 &&
            l[l.size() - key.size() - 1] == '.')
            hits.push_back(l);
    }
    if (hits.size() == 1) return hits.front();
    if (hits.empty()) throw ConfigError("unknown key '" + key + "'");
    std::string msg = "ambiguous key '" + key + "' (";
    for (std::size_t i = 0; i < hits.size(); ++i) msg += (i ? ", " : "") + hits[i];
    throw ConfigError(msg + ")");
}

void apply_override(json& doc, const json& defaults, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + kv + "' is not key=value");
    const std::string path = resolve_key(defaults, kv.substr(0, eq));
    const std::string raw = kv.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json patch = value;
    std::string rest = path;
    std::vector<std::string> parts;
    for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1))
        parts.push_back(rest.substr(0, pos));
    parts.push_back(rest);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
    merge_strict(doc, patch, "");
}

}  // namespace

std::string emit_config(const CampaignConfig& config) { return to_json(config).dump(2) + "\n"; }

CampaignConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    const json defaults = to_json(CampaignConfig{});
    json doc = defaults;
    if (!text.empty()) {
        json user;
        try {
            user = json::parse(text);
        } catch (const json::parse_error& e) {
            // Report a line number rather than a byte offset.
            const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
            const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
            throw ConfigError("line " + std::to_string(line) + ": " + e.what());
        }
        merge_strict(doc, user, "");
    }
    for (const auto& kv : overrides) apply_override(doc, defaults, kv);
    CampaignConfig c;
    try {
        c = from_json(doc);
        c.validate();
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

CampaignConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str(), overrides);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace lpd::cfg
