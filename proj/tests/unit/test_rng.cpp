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

#include <gtest/gtest.h>

#include <set>

#include "lpd/rng.hpp"

namespace {

using lpd::Rng;

TEST(Philox, KnownAnswerVectors) {
    using A4 = std::array<std::uint32_t, 4>;
    EXPECT_EQ(lpd::philox4x32({0, 0, 0, 0}, {0, 0}),
              (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(lpd::philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              {0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(lpd::philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              {0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Rng, SameStreamIsReproducible) {
    Rng a(42, {3, 4, 1, 2}), b(42, {3, 4, 1, 2});
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Rng, StreamsDiffer) {
    std::set<std::uint64_t> first;
    for (std::uint32_t d = 0; d < 4; ++d)
        for (std::uint32_t r = 0; r < 4; ++r)
            for (std::uint32_t arm = 0; arm < 2; ++arm)
                first.insert(Rng(42, {d, r, arm, 1}).next_u64());
    EXPECT_EQ(first.size(), 32u);
    EXPECT_NE(Rng(1).next_u64(), Rng(2).next_u64());
}

TEST(Rng, UniformMomentsAndRange) {
    Rng rng(5);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
    EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
}

TEST(Rng, UniformIntCoversRangeWithoutBias) {
    Rng rng(9);
    std::vector<int> counts(7);
    for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_int(7)];
    for (int c : counts) EXPECT_NEAR(c, 10000, 450);
}

TEST(Rng, NormalMoments) {
    Rng rng(6);
    double sum = 0, sq = 0, quad = 0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
        quad += z * z * z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
    EXPECT_NEAR(quad / n, 3.0, 0.06);
}

TEST(Rng, ComplexNormalIsCircular) {
    Rng rng(8);
    std::complex<double> pseudo{};
    double power = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto z = rng.complex_normal(2.0);
        power += std::norm(z);
        pseudo += z * z;
    }
    EXPECT_NEAR(power / n, 2.0, 0.02);
    EXPECT_LT(std::abs(pseudo / static_cast<double>(n)), 0.02);
}

TEST(Rng, LaplacianAndExponentialScales) {
    Rng rng(10);
    double lap_sq = 0, exp_sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double l = rng.laplacian(15.0);
        lap_sq += l * l;
        const double e = rng.exponential(100.0);
        ASSERT_GE(e, 0.0);
        exp_sum += e;
    }
    EXPECT_NEAR(std::sqrt(lap_sq / n), 15.0, 0.3);
    EXPECT_NEAR(exp_sum / n, 100.0, 1.0);
}

}  // namespace
