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

// lpdsim: SSB detectability campaigns from the command line.
//
//   lpdsim run --out DIR [--config FILE] [--set key=value]... [--seed N] [--workers N]
//   lpdsim report DIR [--pfa P] [--plots DIR]
//   lpdsim selftest [--golden DIR]
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 runtime failure,
// 3 selftest failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpd/bundle.hpp"
#include "lpd/config.hpp"
#include "lpd/experiment.hpp"
#include "lpd/selftest.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kRuntime = 2, kSelftest = 3 };

int default_workers() {
    if (const char* env = std::getenv("LPDSIM_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 0) return n;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid LPDSIM_WORKERS='" << env << "'\n";
    }
    return 0;
}

struct RunArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::string out;
    long long seed = -1;
    int workers = -1;
    bool quiet = false;
};

int cmd_run(const RunArgs& a) {
    lpd::exp::CampaignConfig cfg;
    try {
        auto overrides = a.overrides;
        if (a.seed >= 0) overrides.push_back("campaign.seed=" + std::to_string(a.seed));
        if (a.workers >= 0) overrides.push_back("campaign.workers=" + std::to_string(a.workers));
        else if (const int w = default_workers(); w > 0)
            overrides.insert(overrides.begin(), "campaign.workers=" + std::to_string(w));
        cfg = a.config.empty() ? lpd::cfg::parse_config("", overrides)
                               : lpd::cfg::load_config(a.config, overrides);
    } catch (const lpd::cfg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        long last_pct = -1;
        auto progress = [&](long done, long total) {
            if (a.quiet) return;
            const long pct = 100 * done / total;
            if (pct == last_pct) return;
            last_pct = pct;
            const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::fprintf(stderr, "\r%ld/%ld pairs (%ld%%) %.0f s", done, total, pct, el);
            if (done == total) std::fputc('\n', stderr);
        };
        const auto res = lpd::exp::run_campaign(cfg, progress);
        lpd::bundle::write_bundle(res, a.out);
        if (!a.quiet) std::cout << lpd::bundle::report_text(res);
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}

int cmd_report(const std::string& dir, double pfa, std::string plots) {
    try {
        auto b = lpd::bundle::read_bundle(dir);
        const auto res = lpd::exp::summarize(b.config, std::move(b.trials), pfa);
        if (plots.empty()) plots = dir + "/plots";
        const auto files = lpd::bundle::write_plot_files(res, plots);
        std::cout << lpd::bundle::report_text(res);
        std::cout << "plot data: " << files.size() << " files in " << plots << "\n";
    } catch (const lpd::bundle::BundleError& e) {
        std::cerr << "bad bundle: " << e.what() << "\n";
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "report failed: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}

int cmd_selftest(const std::string& golden) {
    lpd::selftest::Options opt;
    if (!golden.empty()) opt.golden_dir = golden;
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = lpd::selftest::run_selftest(opt);
    int failed = 0;
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        failed += !c.passed;
    }
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (failed ? "selftest FAILED" : "selftest passed") << " (" << checks.size() - failed
              << "/" << checks.size() << ", " << el << " s)\n";
    return failed ? kSelftest : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SSB detectability simulator"};
    app.set_version_flag("--version", std::string(lpd::cfg::version()));
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "run a campaign and write a results bundle");
    run_cmd->add_option("-c,--config", run.config, "JSON configuration file")->check(CLI::ExistingFile);
    run_cmd->add_option("--set", run.overrides, "override, key=value (repeatable)");
    run_cmd->add_option("--seed", run.seed, "campaign seed")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("-w,--workers", run.workers,
                        "worker threads (default: $LPDSIM_WORKERS or all cores)")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_option("-o,--out", run.out, "output bundle directory")->required();
    run_cmd->add_flag("-q,--quiet", run.quiet, "no progress or summary output");

    std::string report_dir, plots;
    double pfa = 0.10;
    auto* report_cmd = app.add_subcommand("report", "summarize a bundle and write plot data");
    report_cmd->add_option("bundle", report_dir, "bundle directory")->required()->check(CLI::ExistingDirectory);
    report_cmd->add_option("--pfa", pfa, "false-alarm probability")->check(CLI::Range(0.0, 1.0));
    report_cmd->add_option("--plots", plots, "plot-data directory (default: BUNDLE/plots)");

    std::string golden;
    auto* self_cmd = app.add_subcommand("selftest", "run built-in consistency checks");
    self_cmd->add_option("--golden", golden, "directory of reference sequence tables")
        ->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    if (*run_cmd) return cmd_run(run);
    if (*report_cmd) return cmd_report(report_dir, pfa, plots);
    if (*self_cmd) return cmd_selftest(golden);
    return kUsage;
}
