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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpd/experiment.hpp"

namespace lpd::bundle {

/// Unreadable or malformed bundle file; what() names the file.
class BundleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// config.json, trials.jsonl, roc_<arm>_<detector>.tsv, distance_pd.tsv and
/// summary.json. Writes into a staging directory and renames it into place.
void write_bundle(const exp::CampaignResults& results, const std::filesystem::path& dir);

struct Bundle {
    exp::CampaignConfig config;
    std::vector<exp::TrialRecord> trials;
};

Bundle read_bundle(const std::filesystem::path& dir);

std::string format_roc(const detect::RocCurve& roc);
std::string format_distance_table(const std::vector<exp::DistanceRow>& rows);
std::string trial_to_json(const exp::TrialRecord& t);
exp::TrialRecord trial_from_json(const std::string& line);

/// Human-readable summary: pd at the configured pfa per arm and detector and
/// the baseline-to-proposed eavesdropper correlator pd reduction.
std::string report_text(const exp::CampaignResults& results);

/// One two-column (pfa, pd) file per curve, pfa strictly increasing.
std::vector<std::filesystem::path> write_plot_files(const exp::CampaignResults& results,
                                                    const std::filesystem::path& dir);

/// Points of a ROC curve with strictly increasing pfa (highest pd kept).
std::vector<std::pair<double, double>> plot_points(const detect::RocCurve& roc);

}  // namespace lpd::bundle
