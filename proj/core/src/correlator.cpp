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

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"
#include "lpd/detection.hpp"

namespace lpd::detect {

namespace {

using detail::AlignedBuffer;

// Search tables shared by every capture with the same numerology.
struct SearchTables {
    int n = 0;
    int shifts = 0;
    // conj(template) for each NID2, interleaved re/im
    std::array<AlignedBuffer<float>, nr::kNid2Count> tconj;
    // [nid2][nid1][m] in {-1,+1}
    std::vector<float> sss;

    explicit SearchTables(const nr::OfdmParams& ofdm) : n(ofdm.fft_size), shifts(n - nr::kSeqLen + 1) {
        for (int nid2 = 0; nid2 < nr::kNid2Count; ++nid2) {
            const auto t = pss_template(nid2, ofdm);
            tconj[nid2] = detail::make_aligned_f(2 * static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                tconj[nid2][2 * i] = static_cast<float>(t[i].real());
                tconj[nid2][2 * i + 1] = static_cast<float>(-t[i].imag());
            }
        }
        sss.resize(static_cast<std::size_t>(nr::kNid2Count) * nr::kNid1Count * nr::kSeqLen);
        for (int nid2 = 0; nid2 < nr::kNid2Count; ++nid2)
            for (int nid1 = 0; nid1 < nr::kNid1Count; ++nid1) {
                const auto d = nr::gen_sss(nid1, nid2);
                float* row = sss.data() + (static_cast<std::size_t>(nid2) * nr::kNid1Count + nid1) * nr::kSeqLen;
                for (int m = 0; m < nr::kSeqLen; ++m) row[m] = d[m];
            }
    }

    const float* sss_row(int nid2, int nid1) const {
        return sss.data() + (static_cast<std::size_t>(nid2) * nr::kNid1Count + nid1) * nr::kSeqLen;
    }

    static const SearchTables& get(const nr::OfdmParams& ofdm) {
        static const SearchTables standard(nr::OfdmParams{});
        if (ofdm.fft_size == standard.n) return standard;
        throw std::domain_error("correlator supports the default numerology only");
    }
};

struct Workspace {
    AlignedBuffer<std::complex<float>> in;
    AlignedBuffer<std::complex<float>> out;
    std::vector<float> acc;
    std::vector<float> zr, zi;

    Workspace(int n, int shifts)
        : in(detail::make_aligned_cf(n)),
          out(detail::make_aligned_cf(n)),
          acc(static_cast<std::size_t>(nr::kNid2Count) * shifts),
          zr(nr::kSeqLen),
          zi(nr::kSeqLen) {}
};

void search_block(CorrelatorMap& map, const CaptureWindow& cap, long block,
                  const nr::OfdmParams& ofdm, const SearchTables& tab, Workspace& ws) {
    const int n = tab.n;
    const int shifts = tab.shifts;
    const auto& fft = detail::FftF::get(n, -1);
    const long t0 = block * map.block_length();
    const long t1 = std::min(map.last_start(), t0 + map.block_length() - 1);

    std::array<CorrelatorMap::Candidate, nr::kNid2Count> best{};
    for (auto& b : best) b.pss_energy = -1.0f;

    for (long tau = t0; tau <= t1; ++tau) {
        std::fill(ws.acc.begin(), ws.acc.end(), 0.0f);
        for (const auto& elem : cap.elements) {
            const float* x = reinterpret_cast<const float*>(elem.data() + tau);
            for (int nid2 = 0; nid2 < nr::kNid2Count; ++nid2) {
                const float* t = tab.tconj[nid2].get();
                float* y = reinterpret_cast<float*>(ws.in.get());
                for (int i = 0; i < n; ++i) {
                    const float xr = x[2 * i], xi = x[2 * i + 1];
                    const float tr = t[2 * i], ti = t[2 * i + 1];
                    y[2 * i] = xr * tr - xi * ti;
                    y[2 * i + 1] = xr * ti + xi * tr;
                }
                fft.execute(ws.in.get(), ws.out.get());
                const float* o = reinterpret_cast<const float*>(ws.out.get());
                float* acc = ws.acc.data() + static_cast<std::size_t>(nid2) * shifts;
                for (int f = 0; f < shifts; ++f)
                    acc[f] += o[2 * f] * o[2 * f] + o[2 * f + 1] * o[2 * f + 1];
            }
        }
        for (int nid2 = 0; nid2 < nr::kNid2Count; ++nid2) {
            const float* acc = ws.acc.data() + static_cast<std::size_t>(nid2) * shifts;
            const auto it = std::max_element(acc, acc + shifts);
            if (*it > best[nid2].pss_energy) {
                best[nid2].pss_energy = *it;
                best[nid2].time_index = tau;
                best[nid2].freq_shift = static_cast<int>(it - acc);
            }
        }
    }

    const long sss_offset = 2L * ofdm.symbol_samples();
    const float scale = 1.0f / (static_cast<float>(nr::kSeqLen) * static_cast<float>(n));
    for (int nid2 = 0; nid2 < nr::kNid2Count; ++nid2) {
        map.candidate(block, nid2) = best[nid2];
        float* sss = map.sss_energy(block, nid2);
        std::fill(sss, sss + nr::kNid1Count, 0.0f);
        for (const auto& elem : cap.elements) {
            std::copy_n(elem.data() + best[nid2].time_index + sss_offset, n, ws.in.get());
            fft.execute(ws.in.get(), ws.out.get());
            for (int m = 0; m < nr::kSeqLen; ++m) {
                const auto y = ws.out[(best[nid2].freq_shift + m + n / 2) % n];
                ws.zr[m] = y.real();
                ws.zi[m] = y.imag();
            }
            for (int nid1 = 0; nid1 < nr::kNid1Count; ++nid1) {
                const float* d = tab.sss_row(nid2, nid1);
                float cr = 0.0f, ci = 0.0f;
                for (int m = 0; m < nr::kSeqLen; ++m) {
                    cr += ws.zr[m] * d[m];
                    ci += ws.zi[m] * d[m];
                }
                sss[nid1] += (cr * cr + ci * ci) * scale;
            }
        }
    }
}

void check_shape(const CorrelatorMap& map, const CaptureWindow& cap) {
    if (cap.element_count() != map.element_count() || cap.samples() != map.capture_samples())
        throw std::domain_error("correlator map does not match the capture");
}

}  // namespace

std::vector<std::complex<double>> pss_template(int nid2, const nr::OfdmParams& ofdm) {
    const auto d = nr::gen_pss(nid2);
    const int n = ofdm.fft_size;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n) * nr::kSeqLen);
    std::vector<std::complex<double>> t(n);
    for (int i = 0; i < n; ++i) {
        std::complex<double> acc{};
        for (int m = 0; m < nr::kSeqLen; ++m)
            acc += static_cast<double>(d[m]) *
                   std::polar(1.0, 2.0 * std::numbers::pi * (m - n / 2) * i / n);
        t[i] = acc * scale;
    }
    return t;
}

CorrelatorMap::CorrelatorMap(long capture_samples, int element_count, double noise_power,
                             const nr::OfdmParams& ofdm)
    : capture_samples_(capture_samples),
      block_length_(ofdm.symbol_samples()),
      last_start_(capture_samples - 2L * ofdm.symbol_samples() - ofdm.fft_size),
      element_count_(element_count),
      noise_power_(noise_power) {
    if (last_start_ < 0) throw std::domain_error("capture too short for the PSS/SSS search");
    block_count_ = last_start_ / block_length_ + 1;
    cand_.resize(static_cast<std::size_t>(block_count_) * nr::kNid2Count);
    sss_.assign(static_cast<std::size_t>(block_count_) * nr::kNid2Count * nr::kNid1Count, 0.0f);
}

CorrelatorMap build_correlator_map(const CaptureWindow& capture, const nr::OfdmParams& ofdm) {
    const auto& tab = SearchTables::get(ofdm);
    CorrelatorMap map(capture.samples(), capture.element_count(), capture.noise_power, ofdm);
    Workspace ws(tab.n, tab.shifts);
    for (long b = 0; b < map.block_count(); ++b) search_block(map, capture, b, ofdm, tab, ws);
    return map;
}

void refresh_correlator_map(CorrelatorMap& map, const CaptureWindow& capture, long first_sample,
                            long last_sample, const nr::OfdmParams& ofdm) {
    check_shape(map, capture);
    if (last_sample < first_sample) return;
    const auto& tab = SearchTables::get(ofdm);
    const long reach = 2L * ofdm.symbol_samples() + ofdm.fft_size - 1;
    const long bl = map.block_length();
    const long lo = std::max(0L, (first_sample - reach - (bl - 1) + bl - 1) / bl);
    const long hi = std::min(map.block_count() - 1, last_sample / bl);
    Workspace ws(tab.n, tab.shifts);
    for (long b = lo; b <= hi; ++b) search_block(map, capture, b, ofdm, tab, ws);
}

DetectorStatistic corr_statistic(const CorrelatorMap& map, const CorrelatorConfig& config) {
    DetectorStatistic best;
    best.value = -1.0;
    const double norm = (config.pss_only ? 1.0 : 2.0) * map.element_count() * map.noise_power();
    for (long b = 0; b < map.block_count(); ++b) {
        for (int nid2 = 0; nid2 < nr::kNid2Count; ++nid2) {
            const auto& c = map.candidate(b, nid2);
            const float* sss = map.sss_energy(b, nid2);
            const auto it = std::max_element(sss, sss + nr::kNid1Count);
            const double v = config.pss_only ? c.pss_energy : c.pss_energy + *it;
            if (v > best.value) {
                best.value = v;
                best.time_index = c.time_index;
                best.freq_index = c.freq_shift;
                best.cell_id = 3 * static_cast<int>(it - sss) + nid2;
            }
        }
    }
    best.value = norm > 0.0 ? std::max(0.0, best.value) / norm : 0.0;
    return best;
}

DetectorStatistic ue_statistic(const CorrelatorMap& map, nr::PhysCellId pci,
                               const CorrelatorConfig& config) {
    if (!pci.valid()) throw std::domain_error("invalid cell id");
    DetectorStatistic best;
    best.value = -1.0;
    best.cell_id = pci.cell_id();
    const double norm = (config.pss_only ? 1.0 : 2.0) * map.element_count() * map.noise_power();
    for (long b = 0; b < map.block_count(); ++b) {
        const auto& c = map.candidate(b, pci.nid2);
        const double v =
            config.pss_only ? c.pss_energy : c.pss_energy + map.sss_energy(b, pci.nid2)[pci.nid1];
        if (v > best.value) {
            best.value = v;
            best.time_index = c.time_index;
            best.freq_index = c.freq_shift;
        }
    }
    best.value = norm > 0.0 ? std::max(0.0, best.value) / norm : 0.0;
    return best;
}

DetectorStatistic corr_detect(const CaptureWindow& capture, const CorrelatorConfig& config,
                              const nr::OfdmParams& ofdm) {
    return corr_statistic(build_correlator_map(capture, ofdm), config);
}

DetectorStatistic ue_detect(const CaptureWindow& capture, nr::PhysCellId pci,
                            const CorrelatorConfig& config, const nr::OfdmParams& ofdm) {
    return ue_statistic(build_correlator_map(capture, ofdm), pci, config);
}

}  // namespace lpd::detect
