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

#include "lpd/selftest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lpd/access_control.hpp"
#include "lpd/bundle.hpp"
#include "lpd/experiment.hpp"
#include "lpd/nr_phy.hpp"
#include "lpd/propagation.hpp"
#include "lpd/rng.hpp"

namespace lpd::selftest {

namespace fs = std::filesystem;

namespace {

// Length-127 m-sequence from the 7-bit shift register with taps (a, 0):
// x(i+7) = (x(i+a) + x(i)) mod 2.
std::vector<int> msequence(int tap, const int (&init)[7]) {
    std::vector<int> x(127 + 7);
    for (int i = 0; i < 7; ++i) x[i] = init[i];
    for (int i = 0; i + 7 < static_cast<int>(x.size()); ++i) x[i + 7] = (x[i + tap] + x[i]) % 2;
    return x;
}

std::vector<int> ref_pss(int nid2) {
    static const int init[7] = {0, 1, 1, 0, 1, 1, 1};
    const auto x = msequence(4, init);
    std::vector<int> d(127);
    for (int n = 0; n < 127; ++n) d[n] = 1 - 2 * x[(n + 43 * nid2) % 127];
    return d;
}

std::vector<int> ref_sss(int nid1, int nid2) {
    static const int init[7] = {1, 0, 0, 0, 0, 0, 0};
    const auto x0 = msequence(4, init);
    const auto x1 = msequence(1, init);
    const int m0 = 15 * (nid1 / 112) + 5 * nid2;
    const int m1 = nid1 % 112;
    std::vector<int> d(127);
    for (int n = 0; n < 127; ++n)
        d[n] = (1 - 2 * x0[(n + m0) % 127]) * (1 - 2 * x1[(n + m1) % 127]);
    return d;
}

template <typename Seq>
bool equal_seq(const Seq& a, const std::vector<int>& b) {
    for (int i = 0; i < 127; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

std::vector<int> read_ints(std::istream& in, std::size_t n) {
    std::vector<int> v;
    int x;
    while (v.size() < n && in >> x) v.push_back(x);
    return v;
}

Check pss_check(const Options& o) {
    Check c{"pss_sequences", true, "3 sequences match the shift-register reference"};
    for (int nid2 = 0; nid2 < 3; ++nid2) {
        if (!equal_seq(nr::gen_pss(nid2), ref_pss(nid2))) {
            c.passed = false;
            c.detail = "generator differs from reference for NID2=" + std::to_string(nid2);
            return c;
        }
        if (o.golden_dir) {
            const auto p = *o.golden_dir / ("pss_" + std::to_string(nid2) + ".txt");
            std::ifstream in(p);
            const auto g = read_ints(in, 127);
            if (g.size() != 127 || !equal_seq(nr::gen_pss(nid2), g)) {
                c.passed = false;
                c.detail = "golden table mismatch in " + p.string();
                return c;
            }
        }
    }
    if (o.golden_dir) c.detail += " and the golden tables";
    return c;
}

Check sss_check(const Options& o) {
    Check c{"sss_sequences", true, "1008 sequences match the shift-register reference"};
    std::ifstream golden;
    if (o.golden_dir) {
        golden.open(*o.golden_dir / "sss_all.txt");
        if (!golden) return {"sss_sequences", false, "missing golden sss_all.txt"};
    }
    for (int nid2 = 0; nid2 < 3; ++nid2) {
        for (int nid1 = 0; nid1 < 336; ++nid1) {
            const auto s = nr::gen_sss(nid1, nid2);
            if (!equal_seq(s, ref_sss(nid1, nid2))) {
                return {"sss_sequences", false,
                        "generator differs for NID1=" + std::to_string(nid1) +
                            " NID2=" + std::to_string(nid2)};
            }
        }
    }
    if (o.golden_dir) {
        // Lines: nid1 nid2 d0 .. d126, ordered by cell id.
        for (int cell = 0; cell < nr::kCellIdCount; ++cell) {
            const auto row = read_ints(golden, 129);
            if (row.size() != 129 || row[0] * 3 + row[1] != cell ||
                !equal_seq(nr::gen_sss(row[0], row[1]),
                           std::vector<int>(row.begin() + 2, row.end())))
                return {"sss_sequences", false,
                        "golden table mismatch at cell id " + std::to_string(cell)};
        }
        c.detail += " and the golden table";
    }
    return c;
}

Check ofdm_check() {
    Rng rng(11);
    const nr::OfdmParams ofdm;
    double worst = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
        const auto pci = nr::PhysCellId::from_cell_id(static_cast<int>(rng.uniform_int(1008)));
        const auto grid = nr::assemble_ssb_grid(pci, nr::gen_pbch_placeholder(rng));
        const int prb = static_cast<int>(rng.uniform_int(23));
        const int sym = static_cast<int>(rng.uniform_int(50));
        const auto wf = nr::ofdm_modulate(grid, ofdm, prb, sym);
        const auto back = nr::ofdm_demodulate(wf, ofdm, prb, sym);
        for (std::size_t i = 0; i < grid.re.size(); ++i)
            worst = std::max(worst, std::abs(grid.re[i] - back.re[i]));
    }
    std::ostringstream os;
    os << "max RE error " << worst;
    return {"ofdm_round_trip", worst < 1e-9, os.str()};
}

Check noise_check() {
    Rng rng(13);
    nr::Waveform wf;
    wf.sample_rate_hz = 15.36e6;
    wf.samples.assign(1000000, nr::cd{});
    const double target_dbm = prop::thermal_noise_dbm(15.36e6, 9.0);
    prop::add_noise(rng, wf, target_dbm);
    const double target = std::pow(10.0, target_dbm / 10.0);
    nr::cd mean{}, pseudo{};
    double var = 0.0;
    for (const auto& x : wf.samples) {
        mean += x;
        var += std::norm(x);
        pseudo += x * x;
    }
    const double n = static_cast<double>(wf.samples.size());
    mean /= n;
    var /= n;
    pseudo /= n;
    const double rel = std::abs(var / target - 1.0);
    const bool ok = rel < 0.01 && std::abs(mean) < 0.01 * std::sqrt(target) &&
                    std::abs(pseudo) < 0.01 * target;
    std::ostringstream os;
    os << "variance error " << 100.0 * rel << "%, |mean|/sigma " << std::abs(mean) / std::sqrt(target)
       << ", |E[x^2]|/var " << std::abs(pseudo) / target;
    return {"noise_statistics", ok, os.str()};
}

Check power_check() {
    const access::PowerLimits capped{true, -100.0, 28.0};
    const double a = access::power_control({-96.42, -100.0, 0.0});
    const double b = access::power_control({-96.42, -124.42, 0.0}, capped);
    const double c = access::power_control({-50.0, -50.0, 0.0});
    const bool ok = std::abs(a - 3.58) < 1e-9 && std::abs(b - 28.0) < 1e-9 && std::abs(c) < 1e-12;
    std::ostringstream os;
    os << "examples gave " << a << ", " << b << ", " << c << " dBm";
    return {"power_control", ok, os.str()};
}

Check diagonal_check(const Options& o) {
    exp::CampaignConfig cfg;
    cfg.n_drops = o.diagonal_pairs;
    cfg.n_realizations = 1;
    cfg.seed = o.seed;
    cfg.gnb_silent = true;
    cfg.workers = 1;
    cfg.phy.window_s = o.diagonal_window_s;
    const auto res = exp::run_campaign(cfg);
    const double tol = 2.0 / std::sqrt(static_cast<double>(cfg.n_drops * cfg.n_realizations));
    double worst = 0.0;
    for (const auto& r : res.rocs)
        for (auto d : exp::kDetectors)
            worst = std::max(worst, diagonal_deviation(bundle::plot_points(r.curve(d))));
    std::ostringstream os;
    os << "max |pd - pfa| " << worst << " (limit " << tol << ")";
    return {"diagonal_sanity", worst <= tol, os.str()};
}

}  // namespace

double diagonal_deviation(const std::vector<std::pair<double, double>>& pfa_pd) {
    double worst = 0.0;
    for (const auto& [pfa, pd] : pfa_pd) worst = std::max(worst, std::abs(pd - pfa));
    return worst;
}

std::vector<Check> run_selftest(const Options& options) {
    std::vector<Check> out;
    auto guarded = [&out](const char* name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("exception: ") + e.what()});
        }
    };
    guarded("pss_sequences", [&] { return pss_check(options); });
    guarded("sss_sequences", [&] { return sss_check(options); });
    guarded("ofdm_round_trip", [] { return ofdm_check(); });
    guarded("noise_statistics", [] { return noise_check(); });
    guarded("power_control", [] { return power_check(); });
    guarded("diagonal_sanity", [&] { return diagonal_check(options); });
    return out;
}

}  // namespace lpd::selftest
