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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lpd::selftest {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Options {
    /// Directory with pss_0.txt .. pss_2.txt and sss_all.txt reference tables.
    std::optional<std::filesystem::path> golden_dir;
    /// Trials of the gNB-silent campaign.
    long diagonal_pairs = 30;
    double diagonal_window_s = 0.002;
    std::uint64_t seed = 1;
};

/// Checks, in order: pss_sequences, sss_sequences, ofdm_round_trip,
/// noise_statistics, power_control, diagonal_sanity.
std::vector<Check> run_selftest(const Options& options = {});

/// Largest |pd - pfa| over the points of a curve.
double diagonal_deviation(const std::vector<std::pair<double, double>>& pfa_pd);

}  // namespace lpd::selftest
