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

namespace lpd::cfg {

/// Malformed document, unknown key, wrong type or invalid value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const char* version();

/// Pretty-printed JSON with every field, sections campaign, phy,
/// propagation, access and detection.
std::string emit_config(const exp::CampaignConfig& config);

/// Parses a (possibly partial) document on top of the defaults, then applies
/// "key=value" overrides. Keys are dotted paths ("campaign.n_drops") or a
/// bare leaf name that is unique across sections ("n_drops"). Values are
/// read as JSON, falling back to a plain string.
exp::CampaignConfig parse_config(const std::string& text,
                                 const std::vector<std::string>& overrides = {});
exp::CampaignConfig load_config(const std::filesystem::path& path,
                                const std::vector<std::string>& overrides = {});

}  // namespace lpd::cfg
