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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace lpd::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

template <typename Plan>
const Plan& cached(int n, int sign) {
    static std::map<std::pair<int, int>, std::unique_ptr<Plan>> cache;
    std::lock_guard lock(planner_mutex());
    auto& slot = cache[{n, sign}];
    if (!slot) slot = std::make_unique<Plan>(n, sign);
    return *slot;
}

}  // namespace

FftD::FftD(int n, int sign) : n_(n) {
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    plan_ = fftw_plan_dft_1d(n, in, out, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (!plan_) throw std::runtime_error("fftw: cannot create double plan");
}

FftD::~FftD() { fftw_destroy_plan(static_cast<fftw_plan>(plan_)); }

const FftD& FftD::get(int n, int sign) { return cached<FftD>(n, sign); }

void FftD::execute(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

FftF::FftF(int n, int sign) : n_(n) {
    // Callers must pass fftwf_malloc'd buffers.
    auto* in = fftwf_alloc_complex(n);
    auto* out = fftwf_alloc_complex(n);
    plan_ = fftwf_plan_dft_1d(n, in, out, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    fftwf_free(in);
    fftwf_free(out);
    if (!plan_) throw std::runtime_error("fftw: cannot create float plan");
}

FftF::~FftF() { fftwf_destroy_plan(static_cast<fftwf_plan>(plan_)); }

const FftF& FftF::get(int n, int sign) { return cached<FftF>(n, sign); }

void FftF::execute(const std::complex<float>* in, std::complex<float>* out) const {
    fftwf_execute_dft(static_cast<fftwf_plan>(plan_),
                      reinterpret_cast<fftwf_complex*>(const_cast<std::complex<float>*>(in)),
                      reinterpret_cast<fftwf_complex*>(out));
}

void FftwFree::operator()(void* p) const { fftwf_free(p); }

AlignedBuffer<std::complex<float>> make_aligned_cf(std::size_t n) {
    auto* p = reinterpret_cast<std::complex<float>*>(fftwf_alloc_complex(n));
    if (!p) throw std::bad_alloc();
    return AlignedBuffer<std::complex<float>>(p);
}

AlignedBuffer<float> make_aligned_f(std::size_t n) {
    auto* p = fftwf_alloc_real(n);
    if (!p) throw std::bad_alloc();
    return AlignedBuffer<float>(p);
}

}  // namespace lpd::detail
