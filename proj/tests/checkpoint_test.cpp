// Copyright 2026 the fusion-bench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fusion/checkpoint.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "test_util.h"

namespace fusion {
namespace {

Checkpoint
sample_checkpoint(bool with_adam) {
    Checkpoint c;
    c.meta = {Modality::kImage, 42, 17};
    c.params = init_params(Architecture{9, 5, 4}, 3);
    c.params.b3() = -0.0;
    c.params.values()[2] = std::numeric_limits<double>::denorm_min();
    if (with_adam) {
        AdamState s(c.params.values().size());
        std::mt19937_64 gen(1);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        for (std::size_t i = 0; i < s.m.size(); ++i) {
            s.m[i] = d(gen) - 0.5;
            s.v[i] = d(gen) * 1e-9;
        }
        s.t = 123;
        c.adam = s;
    }
    return c;
}

bool
bit_equal(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), 8 * a.size()) == 0;
}

}  // namespace

TEST(CheckpointTest, RoundTripIsBitExact) {
    for (bool with_adam : {false, true}) {
        const Checkpoint c = sample_checkpoint(with_adam);
        const auto bytes = serialize_checkpoint(c);
        const Checkpoint back = parse_checkpoint(bytes);
        EXPECT_EQ(back.meta.modality, Modality::kImage);
        EXPECT_EQ(back.meta.seed, 42u);
        EXPECT_EQ(back.meta.epoch, 17u);
        EXPECT_EQ(back.params.arch(), c.params.arch());
        EXPECT_TRUE(bit_equal(back.params.values(), c.params.values()));
        ASSERT_EQ(back.adam.has_value(), with_adam);
        if (with_adam) {
            EXPECT_EQ(*back.adam, *c.adam);
        }
        EXPECT_EQ(serialize_checkpoint(back), bytes);
    }
}

TEST(CheckpointTest, FileRoundTrip) {
    testing::TempDir dir("ckpt");
    const auto path = dir.path() / "m.ckpt";
    const Checkpoint c = sample_checkpoint(true);
    write_checkpoint(c, path);
    const Checkpoint back = read_checkpoint(path);
    EXPECT_EQ(back.params, c.params);
    EXPECT_THROW(read_checkpoint(dir.path() / "missing.ckpt"), CheckpointError);
}

TEST(CheckpointTest, BlobSize) {
    const Checkpoint c = sample_checkpoint(false);
    const auto bytes = serialize_checkpoint(c);
    const auto newline = std::find(bytes.begin(), bytes.end(), '\n');
    EXPECT_EQ(static_cast<std::size_t>(bytes.end() - newline - 1), 8 * c.params.arch().param_count());
}

TEST(CheckpointTest, RejectsMalformedInput) {
    auto good = serialize_checkpoint(sample_checkpoint(false));
    const std::string header(good.begin(), std::find(good.begin(), good.end(), '\n'));

    std::vector<std::uint8_t> no_newline(header.begin(), header.end());
    EXPECT_THROW(parse_checkpoint(no_newline), CheckpointError);

    auto truncated = good;
    truncated.pop_back();
    EXPECT_THROW(parse_checkpoint(truncated), CheckpointError);

    auto replace = [&](const std::string& from, const std::string& to) {
        std::string h = header;
        h.replace(h.find(from), from.size(), to);
        std::vector<std::uint8_t> out(h.begin(), h.end());
        out.insert(out.end(), good.begin() + static_cast<std::ptrdiff_t>(header.size()), good.end());
        return out;
    };
    EXPECT_THROW(parse_checkpoint(replace("fusion-mlp", "other")), CheckpointError);
    EXPECT_THROW(parse_checkpoint(replace("\"hidden1\":5", "\"hidden1\":6")), CheckpointError);
    EXPECT_THROW(parse_checkpoint(replace("\"image\"", "\"audio\"")), CheckpointError);
    EXPECT_THROW(parse_checkpoint(replace("\"epoch\"", "\"epoc\"")), CheckpointError);

    Checkpoint bad = sample_checkpoint(true);
    bad.adam->m.pop_back();
    EXPECT_THROW(serialize_checkpoint(bad), CheckpointError);
}

}  // namespace fusion
