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

// Thin FFTW wrappers shared by the signal-processing modules. Plans are
// created once per (size, direction) under a lock and executed with the
// new-array interface, which FFTW guarantees to be thread-safe.

#include <complex>
#include <memory>

namespace lpd::detail {

class FftD {
public:
    /// sign: -1 forward, +1 backward. Unnormalized.
    static const FftD& get(int n, int sign);
    void execute(const std::complex<double>* in, std::complex<double>* out) const;
    int size() const { return n_; }

    FftD(int n, int sign);
    ~FftD();
    FftD(const FftD&) = delete;
    FftD& operator=(const FftD&) = delete;

private:
    int n_;
    void* plan_;
};

/// Single-precision plan for 32-byte aligned buffers (see AlignedBuffer).
class FftF {
public:
    static const FftF& get(int n, int sign);
    void execute(const std::complex<float>* in, std::complex<float>* out) const;
    int size() const { return n_; }

    FftF(int n, int sign);
    ~FftF();
    FftF(const FftF&) = delete;
    FftF& operator=(const FftF&) = delete;

private:
    int n_;
    void* plan_;
};

struct FftwFree {
    void operator()(void* p) const;
};

template <typename T>
using AlignedBuffer = std::unique_ptr<T[], FftwFree>;

AlignedBuffer<std::complex<float>> make_aligned_cf(std::size_t n);
AlignedBuffer<float> make_aligned_f(std::size_t n);

}  // namespace lpd::detail
