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

#include <benchmark/benchmark.h>

#include "lpd/detection.hpp"
#include "lpd/nr_phy.hpp"
#include "lpd/propagation.hpp"

namespace {

using namespace lpd;

detect::CaptureWindow noise_capture(long samples, int elements) {
    Rng rng(1);
    detect::CaptureWindow c;
    c.elements.assign(elements, std::vector<detect::cf>(samples));
    for (auto& e : c.elements)
        for (auto& s : e) s = detect::cf(rng.complex_normal());
    return c;
}

nr::SsbGrid grid() {
    Rng rng(2);
    return nr::assemble_ssb_grid(nr::PhysCellId::make(10, 1), nr::gen_pbch_placeholder(rng));
}

void BM_OfdmModulate(benchmark::State& state) {
    const auto g = grid();
    const nr::OfdmParams p;
    for (auto _ : state) benchmark::DoNotOptimize(nr::ofdm_modulate(g, p, 11, 0));
}
BENCHMARK(BM_OfdmModulate);

void BM_ComposeBaselineWindow(benchmark::State& state) {
    const auto g = grid();
    std::vector<nr::SsbTransmission> tx;
    for (int b = 0; b < 24; ++b) tx.push_back({g, b, 28.0, b % 8});
    for (auto _ : state) benchmark::DoNotOptimize(nr::compose_tx_window(tx, {}, 11));
    state.SetLabel("24 beams, 25 ms");
}
BENCHMARK(BM_ComposeBaselineWindow)->Unit(benchmark::kMillisecond);

void BM_AccumulateChannel(benchmark::State& state) {
    Rng rng(3);
    const prop::CellGeometry geo;
    const auto link = prop::make_link(rng, geo, {50.0, 20.0}, 3.5);
    const auto ch = prop::gen_channel(rng, link, prop::UpaConfig::gnb(), prop::UpaConfig::ue(), geo, {});
    const auto beams = prop::dft_codebook(prop::UpaConfig::gnb(), geo);
    const auto seg = nr::ofdm_modulate(grid(), {}, 11, 0).samples;
    std::vector<std::vector<std::complex<float>>> rx(ch.rx_count(),
                                                     std::vector<std::complex<float>>(seg.size() + 64));
    for (auto _ : state) {
        prop::accumulate_channel<float>(seg, 0, ch, beams[0], 1e-4, rx);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(seg.size()));
}
BENCHMARK(BM_AccumulateChannel);

void BM_EnergyDetect(benchmark::State& state) {
    const auto c = noise_capture(state.range(0), 4);
    for (auto _ : state) benchmark::DoNotOptimize(detect::energy_detect(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EnergyDetect)->Arg(30720)->Arg(384000)->Unit(benchmark::kMillisecond);

void BM_CorrelatorMap(benchmark::State& state) {
    const auto c = noise_capture(1608 + 548 * state.range(0), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(detect::build_correlator_map(c));
    state.SetItemsProcessed(state.iterations() * 548 * state.range(0));
}
BENCHMARK(BM_CorrelatorMap)->Args({4, 1})->Args({4, 4})->Unit(benchmark::kMillisecond);

void BM_CorrStatistic(benchmark::State& state) {
    const auto map = detect::build_correlator_map(noise_capture(1608 + 548 * 40, 1));
    for (auto _ : state) benchmark::DoNotOptimize(detect::corr_statistic(map));
}
BENCHMARK(BM_CorrStatistic);

void BM_RocFromStats(benchmark::State& state) {
    Rng rng(4);
    std::vector<double> h1(state.range(0)), h0(state.range(0));
    for (auto& x : h1) x = rng.normal() + 1.0;
    for (auto& x : h0) x = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(detect::roc_from_stats(h1, h0));
}
BENCHMARK(BM_RocFromStats)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
