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

#include "lpd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"

namespace lpd::detect {

DetectorStatistic energy_detect(const CaptureWindow& capture, const SlidingWindowSpec& spec,
                                const nr::OfdmParams& ofdm) {
    const int n = ofdm.fft_size;
    const long len = capture.samples();
    const int hop = spec.time_step_samples;
    if (hop <= 0 || spec.freq_step_sc <= 0 || spec.freq_width_sc <= 0 || spec.freq_width_sc > n ||
        spec.time_width_symbols <= 0)
        throw std::domain_error("invalid sliding window");
    const int frames_per_symbol =
        std::max(1, static_cast<int>(std::lround(static_cast<double>(ofdm.symbol_samples()) / hop)));
    const long frames = len >= n ? (len - n) / hop + 1 : 0;
    const long span = static_cast<long>(spec.time_width_symbols - 1) * frames_per_symbol;
    if (frames <= span) throw std::domain_error("capture shorter than the sliding window");
    const int positions = (n - spec.freq_width_sc) / spec.freq_step_sc + 1;

    const auto& fft = detail::FftF::get(n, -1);
    auto in = detail::make_aligned_cf(n);
    auto out = detail::make_aligned_cf(n);
    std::vector<double> power(n), prefix(n + 1);
    std::vector<float> band(static_cast<std::size_t>(frames) * positions);

    for (long f = 0; f < frames; ++f) {
        std::fill(power.begin(), power.end(), 0.0);
        for (const auto& x : capture.elements) {
            std::copy_n(x.data() + f * hop, n, in.get());
            fft.execute(in.get(), out.get());
            for (int k = 0; k < n; ++k) power[k] += std::norm(out[k]);
        }
        prefix[0] = 0.0;
        for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + power[ofdm.bin_of(i)];
        for (int p = 0; p < positions; ++p) {
            const int lo = p * spec.freq_step_sc;
            band[f * positions + p] = static_cast<float>(prefix[lo + spec.freq_width_sc] - prefix[lo]);
        }
    }

    DetectorStatistic best;
    double best_energy = -1.0;
    for (long f = 0; f + span < frames; ++f) {
        for (int p = 0; p < positions; ++p) {
            double e = 0.0;
            for (int s = 0; s < spec.time_width_symbols; ++s)
                e += band[(f + static_cast<long>(s) * frames_per_symbol) * positions + p];
            if (e > best_energy) {
                best_energy = e;
                best.time_index = f * hop;
                best.freq_index = p * spec.freq_step_sc / 12;
            }
        }
    }
    // Unnormalized FFT: each bin carries n times the per-sample noise variance.
    const double noise_window = static_cast<double>(capture.element_count()) * n *
                                spec.freq_width_sc * spec.time_width_symbols * capture.noise_power;
    best.value = noise_window > 0.0 ? best_energy / noise_window : 0.0;
    return best;
}

double rsrp_dbm(std::span<const std::complex<double>> sss_res) {
    if (sss_res.empty()) throw std::domain_error("no SSS resource elements");
    double acc = 0.0;
    for (const auto& x : sss_res) acc += std::norm(x);
    return 10.0 * std::log10(acc / static_cast<double>(sss_res.size()));
}

RocPoint evaluate_threshold(std::span<const double> h1, std::span<const double> h0,
                            double threshold) {
    if (h1.empty() || h0.empty()) throw std::domain_error("empty statistic list");
    auto frac = [threshold](std::span<const double> v) {
        return static_cast<double>(std::count_if(v.begin(), v.end(),
                                                 [threshold](double x) { return x > threshold; })) /
               static_cast<double>(v.size());
    };
    return {threshold, frac(h0), frac(h1)};
}

RocCurve roc_from_stats(std::span<const double> h1, std::span<const double> h0) {
    if (h1.empty() || h0.empty()) throw std::domain_error("empty statistic list");
    std::vector<double> a(h1.begin(), h1.end()), b(h0.begin(), h0.end());
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    std::vector<double> thresholds;
    thresholds.reserve(a.size() + b.size() + 1);
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(thresholds),
               std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    thresholds.push_back(thresholds.back() - 1.0);

    RocCurve roc;
    std::size_t ia = 0, ib = 0;
    for (double t : thresholds) {
        while (ia < a.size() && a[ia] > t) ++ia;
        while (ib < b.size() && b[ib] > t) ++ib;
        const RocPoint pt{t, static_cast<double>(ib) / b.size(), static_cast<double>(ia) / a.size()};
        if (!roc.points.empty() && roc.points.back().pfa == pt.pfa && roc.points.back().pd == pt.pd)
            continue;
        roc.points.push_back(pt);
    }
    return roc;
}

double pd_at_pfa(const RocCurve& roc, double target_pfa) {
    const auto& p = roc.points;
    if (p.empty()) throw std::domain_error("empty ROC curve");
    long idx = -1;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i].pfa <= target_pfa) idx = static_cast<long>(i);
    if (idx < 0) return 0.0;
    const auto& lo = p[idx];
    if (lo.pfa == target_pfa || idx + 1 == static_cast<long>(p.size())) return lo.pd;
    const auto& hi = p[idx + 1];
    return lo.pd + (hi.pd - lo.pd) * (target_pfa - lo.pfa) / (hi.pfa - lo.pfa);
}

double threshold_at_pfa(std::span<const double> h0, double target_pfa) {
    if (h0.empty()) throw std::domain_error("empty statistic list");
    std::vector<double> v(h0.begin(), h0.end());
    std::sort(v.begin(), v.end(), std::greater<>());
    const auto k = static_cast<std::size_t>(std::floor(target_pfa * v.size()));
    if (k >= v.size()) return v.back() - 1.0;
    return v[k];
}

}  // namespace lpd::detect
