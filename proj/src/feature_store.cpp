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

#include "fusion/feature_store.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "fusion/rng.h"
#include "json.hpp"

namespace fusion {

std::string_view
modality_name(Modality m) {
    switch (m) {
        case Modality::kText:
            return "text";
        case Modality::kImage:
            return "image";
        case Modality::kMultimodal:
            return "multimodal";
    }
    return "unknown";
}

Modality
parse_modality(std::string_view name) {
    if (name == "text") {
        return Modality::kText;
    }
    if (name == "image") {
        return Modality::kImage;
    }
    if (name == "multimodal") {
        return Modality::kMultimodal;
    }
    throw std::invalid_argument("unknown modality '" + std::string(name) +
                                "' (expected text, image or multimodal)");
}

std::size_t
modality_dim(Modality m) {
    switch (m) {
        case Modality::kText:
            return kTextDim;
        case Modality::kImage:
            return kImageDim;
        case Modality::kMultimodal:
            return kFusedDim;
    }
    return 0;
}

ClassCounts
Dataset::class_counts() const {
    ClassCounts counts;
    for (const auto& r : records) {
        if (r.label == Label::kHate) {
            ++counts.hate;
        } else {
            ++counts.non_hate;
        }
    }
    return counts;
}

double
Dataset::majority_fraction() const {
    const auto counts = class_counts();
    if (counts.total() == 0) {
        throw std::invalid_argument("majority fraction of an empty dataset");
    }
    return static_cast<double>(std::max(counts.hate, counts.non_hate)) /
           static_cast<double>(counts.total());
}

IdIndex
build_id_index(const Dataset& ds) {
    IdIndex index;
    index.reserve(ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        index.emplace(ds.records[i].id, i);
    }
    return index;
}

namespace {

bool
all_finite(std::span<const float> values) {
    return std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); });
}

}  // namespace

void
validate_record(const FeatureRecord& r) {
    if (r.id.empty()) {
        throw InvalidRecordError("record id must be non-empty");
    }
    if (r.id.size() > 0xffff) {
        throw InvalidRecordError("record id longer than 65535 bytes: " + r.id.substr(0, 32));
    }
    if (r.label != Label::kHate && r.label != Label::kNonHate) {
        throw InvalidRecordError("record " + r.id + ": label must be 0 or 1");
    }
    if (r.text_vec.size() != kTextDim) {
        throw InvalidRecordError("record " + r.id + ": text_vec has " +
                                 std::to_string(r.text_vec.size()) + " values, expected " +
                                 std::to_string(kTextDim));
    }
    if (r.image_vec.size() != kImageDim) {
        throw InvalidRecordError("record " + r.id + ": image_vec has " +
                                 std::to_string(r.image_vec.size()) + " values, expected " +
                                 std::to_string(kImageDim));
    }
    if (!all_finite(r.text_vec) || !all_finite(r.image_vec)) {
        throw InvalidRecordError("record " + r.id + ": non-finite embedding component");
    }
    if (r.ocr_text && r.ocr_text->size() > 0xffffffffULL) {
        throw InvalidRecordError("record " + r.id + ": OCR text too long");
    }
}

void
validate_dataset(const Dataset& ds) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(ds.records.size());
    for (const auto& r : ds.records) {
        validate_record(r);
        if (!seen.insert(r.id).second) {
            throw InvalidRecordError("duplicate record id: " + r.id);
        }
    }
}

// ---------------------------------------------------------------------------
// FUSB encoding
// ---------------------------------------------------------------------------

std::string_view
error_kind_name(FeatureFileError::Kind kind) {
    using Kind = FeatureFileError::Kind;
    switch (kind) {
        case Kind::kIo:
            return "io";
        case Kind::kMalformedHeader:
            return "malformed-header";
        case Kind::kTruncatedRecord:
            return "truncated-record";
        case Kind::kDimensionMismatch:
            return "dimension-mismatch";
        case Kind::kDuplicateId:
            return "duplicate-id";
        case Kind::kInvalidValue:
            return "invalid-value";
    }
    return "unknown";
}

std::size_t
fusb_record_size(std::size_t id_len, std::size_t ocr_len) {
    return 2 + id_len + 1 + 4 + ocr_len + 4 * (kTextDim + kImageDim);
}

namespace {

constexpr char kMagic[4] = {'F', 'U', 'S', 'B'};

class ByteWriter {
public:
    explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {
    }

    template <typename T>
    void
    put(T value) {
        static_assert(std::is_unsigned_v<T>);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            out_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
        }
    }

    void
    put_bytes(std::string_view s) {
        out_.insert(out_.end(), s.begin(), s.end());
    }

    void
    put_floats(std::span<const float> values) {
        for (float v : values) {
            put(std::bit_cast<std::uint32_t>(v));
        }
    }

private:
    std::vector<std::uint8_t>& out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
    }

    std::uint64_t
    offset() const {
        return pos_;
    }

    std::size_t
    remaining() const {
        return bytes_.size() - pos_;
    }

    template <typename T>
    T
    get() {
        T value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            value |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
        }
        pos_ += sizeof(T);
        return value;
    }

    std::string
    get_string(std::size_t len) {
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
        pos_ += len;
        return s;
    }

    void
    get_floats(std::vector<float>& out, std::size_t count) {
        out.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = std::bit_cast<float>(get<std::uint32_t>());
        }
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

[[noreturn]] void
fail(FeatureFileError::Kind kind, std::uint64_t offset, const std::string& msg) {
    throw FeatureFileError(kind, offset, msg + " (at byte offset " + std::to_string(offset) + ")");
}

}  // namespace

std::vector<std::uint8_t>
serialize_feature_bytes(const Dataset& ds) {
    validate_dataset(ds);

    std::size_t total = kFusbHeaderSize;
    for (const auto& r : ds.records) {
        total += fusb_record_size(r.id.size(), r.ocr_text ? r.ocr_text->size() : 0);
    }
    std::vector<std::uint8_t> out;
    out.reserve(total);
    ByteWriter w(out);
    w.put_bytes(std::string_view(kMagic, 4));
    w.put(kFusbVersion);
    w.put(static_cast<std::uint64_t>(ds.records.size()));
    w.put(static_cast<std::uint32_t>(kTextDim));
    w.put(static_cast<std::uint32_t>(kImageDim));
    for (const auto& r : ds.records) {
        w.put(static_cast<std::uint16_t>(r.id.size()));
        w.put_bytes(r.id);
        w.put(static_cast<std::uint8_t>(r.label));
        const std::string_view ocr = r.ocr_text ? std::string_view(*r.ocr_text) : std::string_view();
        w.put(static_cast<std::uint32_t>(ocr.size()));
        w.put_bytes(ocr);
        w.put_floats(r.text_vec);
        w.put_floats(r.image_vec);
    }
    return out;
}

Dataset
parse_feature_bytes(std::span<const std::uint8_t> bytes) {
    using Kind = FeatureFileError::Kind;
    ByteReader in(bytes);
    if (in.remaining() < kFusbHeaderSize) {
        fail(Kind::kMalformedHeader, 0,
             "file is " + std::to_string(bytes.size()) + " bytes, shorter than the 24-byte header");
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        fail(Kind::kMalformedHeader, 0, "bad magic, expected \"FUSB\"");
    }
    in.get<std::uint32_t>();  // magic
    const auto version = in.get<std::uint32_t>();
    if (version != kFusbVersion) {
        fail(Kind::kMalformedHeader, 4, "unsupported version " + std::to_string(version));
    }
    const auto count = in.get<std::uint64_t>();
    const auto text_dim = in.get<std::uint32_t>();
    if (text_dim != kTextDim) {
        fail(Kind::kDimensionMismatch, 16,
             "text_dim " + std::to_string(text_dim) + ", expected " + std::to_string(kTextDim));
    }
    const auto image_dim = in.get<std::uint32_t>();
    if (image_dim != kImageDim) {
        fail(Kind::kDimensionMismatch, 20,
             "image_dim " + std::to_string(image_dim) + ", expected " + std::to_string(kImageDim));
    }

    // An inflated count must not drive the reservation; truncation is
    // reported at the record where the bytes run out.
    const std::size_t plausible = std::min<std::uint64_t>(count, in.remaining() / fusb_record_size(0, 0));
    Dataset ds;
    ds.records.reserve(plausible);
    std::unordered_set<std::string> seen;
    seen.reserve(plausible);
    const std::size_t vec_bytes = 4 * (kTextDim + kImageDim);
    for (std::uint64_t n = 0; n < count; ++n) {
        const std::uint64_t start = in.offset();
        const std::string which = "record " + std::to_string(n);
        if (in.remaining() < 2) {
            fail(Kind::kTruncatedRecord, start, which + " truncated in id_len");
        }
        const auto id_len = in.get<std::uint16_t>();
        if (in.remaining() < std::size_t{id_len} + 1 + 4) {
            fail(Kind::kTruncatedRecord, start, which + " truncated in id/label/ocr_len");
        }
        FeatureRecord r;
        r.id = in.get_string(id_len);
        if (r.id.empty()) {
            fail(Kind::kInvalidValue, start, which + " has an empty id");
        }
        const std::uint64_t label_offset = in.offset();
        const auto label = in.get<std::uint8_t>();
        if (label > 1) {
            fail(Kind::kInvalidValue, label_offset,
                 which + " (" + r.id + ") label " + std::to_string(label) + " not in {0,1}");
        }
        r.label = static_cast<Label>(label);
        const auto ocr_len = in.get<std::uint32_t>();
        if (in.remaining() < std::size_t{ocr_len} + vec_bytes) {
            fail(Kind::kTruncatedRecord, start,
                 which + " (" + r.id + ") truncated: needs " +
                     std::to_string(std::size_t{ocr_len} + vec_bytes) + " more bytes, " +
                     std::to_string(in.remaining()) + " available");
        }
        if (ocr_len > 0) {
            r.ocr_text = in.get_string(ocr_len);
        }
        const std::uint64_t vec_offset = in.offset();
        in.get_floats(r.text_vec, kTextDim);
        in.get_floats(r.image_vec, kImageDim);
        if (!all_finite(r.text_vec) || !all_finite(r.image_vec)) {
            fail(Kind::kInvalidValue, vec_offset, which + " (" + r.id + ") has a non-finite component");
        }
        if (!seen.insert(r.id).second) {
            fail(Kind::kDuplicateId, start, "duplicate id '" + r.id + "' in " + which);
        }
        ds.records.push_back(std::move(r));
    }
    if (in.remaining() != 0) {
        fail(Kind::kMalformedHeader, in.offset(),
             std::to_string(in.remaining()) + " trailing bytes after the declared " +
                 std::to_string(count) + " records");
    }
    return ds;
}

Dataset
read_feature_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FeatureFileError(FeatureFileError::Kind::kIo, 0, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw FeatureFileError(FeatureFileError::Kind::kIo, 0, "read error on " + path.string());
    }
    Dataset ds = parse_feature_bytes(bytes);
    ds.provenance = "fusb:" + path.string();
    return ds;
}

void
write_feature_file(const Dataset& ds, const std::filesystem::path& path) {
    const auto bytes = serialize_feature_bytes(ds);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FeatureFileError(FeatureFileError::Kind::kIo, 0, "cannot create " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
        throw FeatureFileError(FeatureFileError::Kind::kIo, 0, "write error on " + path.string());
    }
}

// ---------------------------------------------------------------------------
// Stratified split
// ---------------------------------------------------------------------------

DatasetSplit
stratified_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train_fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        by_class[static_cast<int>(ds.records[i].label)].push_back(i);
    }
    if (by_class[0].empty() || by_class[1].empty()) {
        throw std::invalid_argument("stratified split needs both classes present");
    }

    const std::size_t n = ds.records.size();
    auto total_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    total_train = std::clamp<std::size_t>(total_train, 1, n - 1);

    // Largest remainder apportionment of total_train across the two classes.
    std::size_t take[2];
    double remainder[2];
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
        const double quota = static_cast<double>(total_train) * static_cast<double>(by_class[c].size()) /
                             static_cast<double>(n);
        take[c] = static_cast<std::size_t>(std::floor(quota));
        remainder[c] = quota - std::floor(quota);
        assigned += take[c];
    }
    // The two remainders sum to an integer below 2, so at most one record is
    // left over. Ties go to class 0.
    if (assigned < total_train) {
        int c = remainder[1] > remainder[0] ? 1 : 0;
        if (take[c] == by_class[c].size()) {
            c = 1 - c;
        }
        ++take[c];
    }

    std::vector<char> in_train(n, 0);
    for (int c = 0; c < 2; ++c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        shuffle(std::span<std::size_t>(by_class[c]), rng);
        for (std::size_t k = 0; k < take[c]; ++k) {
            in_train[by_class[c][k]] = 1;
        }
    }

    DatasetSplit split;
    split.seed = seed;
    split.train_fraction = train_fraction;
    split.train_ids.reserve(total_train);
    split.val_ids.reserve(n - total_train);
    for (std::size_t i = 0; i < n; ++i) {
        (in_train[i] ? split.train_ids : split.val_ids).push_back(ds.records[i].id);
    }
    return split;
}

std::string
split_to_json(const DatasetSplit& split) {
    nlohmann::json j;
    j["seed"] = split.seed;
    j["train_fraction"] = split.train_fraction;
    j["train_ids"] = split.train_ids;
    j["val_ids"] = split.val_ids;
    return j.dump(2) + "\n";
}

DatasetSplit
split_from_json(std::string_view text) {
    DatasetSplit split;
    try {
        const auto j = nlohmann::json::parse(text);
        split.seed = j.at("seed").get<std::uint64_t>();
        split.train_fraction = j.at("train_fraction").get<double>();
        split.train_ids = j.at("train_ids").get<std::vector<std::string>>();
        split.val_ids = j.at("val_ids").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed split JSON: ") + e.what());
    }
    return split;
}

// ---------------------------------------------------------------------------
// Modality selection
// ---------------------------------------------------------------------------

void
select_modality_into(const FeatureRecord& r, Modality m, std::span<double> out) {
    if (out.size() != modality_dim(m)) {
        throw std::invalid_argument("select_modality_into: output has wrong width");
    }
    auto it = out.begin();
    if (m != Modality::kImage) {
        it = std::copy(r.text_vec.begin(), r.text_vec.end(), it);
    }
    if (m != Modality::kText) {
        std::copy(r.image_vec.begin(), r.image_vec.end(), it);
    }
}

std::vector<double>
select_modality(const FeatureRecord& r, Modality m) {
    validate_record(r);
    std::vector<double> out(modality_dim(m));
    select_modality_into(r, m, out);
    return out;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

std::vector<ManifestEntry>
parse_manifest(std::string_view text) {
    std::vector<ManifestEntry> entries;
    std::unordered_set<std::string> seen;
    std::istringstream lines{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::string where = "manifest line " + std::to_string(line_no);
        ManifestEntry e;
        try {
            const auto j = nlohmann::json::parse(line);
            e.id = j.at("id").get<std::string>();
            e.path = j.at("path").get<std::string>();
            const auto label = j.at("label").get<int>();
            if (label != 0 && label != 1) {
                throw std::invalid_argument(where + ": label must be 0 or 1");
            }
            e.label = static_cast<Label>(label);
        } catch (const nlohmann::json::exception& ex) {
            throw std::invalid_argument(where + ": " + ex.what());
        }
        if (e.id.empty()) {
            throw std::invalid_argument(where + ": empty id");
        }
        if (!seen.insert(e.id).second) {
            throw std::invalid_argument(where + ": duplicate id '" + e.id + "'");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<ManifestEntry>
read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open manifest " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

}  // namespace fusion
