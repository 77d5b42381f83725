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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fusion {

inline constexpr std::size_t kTextDim = 768;
inline constexpr std::size_t kImageDim = 4096;
inline constexpr std::size_t kFusedDim = kTextDim + kImageDim;

/// Class label. Stored as 0/1 on disk, 1 is the positive (hate) class.
enum class Label : std::uint8_t { kNonHate = 0, kHate = 1 };

inline double
label_value(Label label) {
    return label == Label::kHate ? 1.0 : 0.0;
}

enum class Modality { kText, kImage, kMultimodal };

std::string_view
modality_name(Modality m);

/// Parses "text", "image" or "multimodal".
Modality
parse_modality(std::string_view name);

std::size_t
modality_dim(Modality m);

/// One meme: embeddings as they appear in the feature file (32-bit floats).
struct FeatureRecord {
    std::string id;
    Label label = Label::kNonHate;
    std::vector<float> text_vec;
    std::vector<float> image_vec;
    std::optional<std::string> ocr_text;

    bool
    operator==(const FeatureRecord&) const = default;
};

struct ClassCounts {
    std::size_t non_hate = 0;
    std::size_t hate = 0;

    std::size_t
    total() const {
        return non_hate + hate;
    }
};

struct Dataset {
    std::vector<FeatureRecord> records;
    std::string provenance;

    ClassCounts
    class_counts() const;

    /// max(n0, n1) / (n0 + n1). Throws on an empty dataset.
    double
    majority_fraction() const;
};

/// id -> position in Dataset::records.
using IdIndex = std::unordered_map<std::string, std::size_t>;

IdIndex
build_id_index(const Dataset& ds);

/// Thrown for record-level invariant violations (dimensions, finiteness,
/// empty or duplicate ids).
class InvalidRecordError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void
validate_record(const FeatureRecord& r);

/// Checks every record plus id uniqueness.
void
validate_dataset(const Dataset& ds);

// ---------------------------------------------------------------------------
// FUSB v1 feature file.
//
//   offset  size  field
//   0       4     magic "FUSB"
//   4       4     version (u32 = 1)
//   8       8     record_count (u64)
//   16      4     text_dim (u32 = 768)
//   20      4     image_dim (u32 = 4096)
//
// followed by record_count records, each:
//   id_len u16, id bytes (UTF-8), label u8 in {0,1}, ocr_len u32, ocr bytes,
//   text_dim float32, image_dim float32.
//
// All integers and floats little-endian.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kFusbHeaderSize = 24;
inline constexpr std::uint32_t kFusbVersion = 1;

/// Size of one record body on disk.
std::size_t
fusb_record_size(std::size_t id_len, std::size_t ocr_len);

class FeatureFileError : public std::runtime_error {
public:
    enum class Kind {
        kIo,
        kMalformedHeader,
        kTruncatedRecord,
        kDimensionMismatch,
        kDuplicateId,
        kInvalidValue,
    };

    FeatureFileError(Kind kind, std::uint64_t offset, const std::string& what)
        : std::runtime_error(what), kind_(kind), offset_(offset) {
    }

    Kind
    kind() const {
        return kind_;
    }

    /// Byte offset in the file where the problem was detected.
    std::uint64_t
    offset() const {
        return offset_;
    }

private:
    Kind kind_;
    std::uint64_t offset_;
};

std::string_view
error_kind_name(FeatureFileError::Kind kind);

/// Parses a FUSB buffer. Record order is preserved; an absent OCR string is
/// stored as ocr_len 0 and read back as nullopt.
Dataset
parse_feature_bytes(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t>
serialize_feature_bytes(const Dataset& ds);

Dataset
read_feature_file(const std::filesystem::path& path);

/// Validates `ds` before anything is written.
void
write_feature_file(const Dataset& ds, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Stratified split
// ---------------------------------------------------------------------------

struct DatasetSplit {
    std::vector<std::string> train_ids;
    std::vector<std::string> val_ids;
    std::uint64_t seed = 0;
    double train_fraction = 0.0;

    bool
    operator==(const DatasetSplit&) const = default;
};

/// Shuffles each class with its own seeded stream, then cuts each class
/// proportionally. The overall train size is round(fraction * N) and the
/// per-class remainders are handed out by the largest-remainder rule, so each
/// class is within one record of its exact quota. Both sides are kept
/// non-empty. Ids in each subset keep dataset order.
DatasetSplit
stratified_split(const Dataset& ds, double train_fraction, std::uint64_t seed);

std::string
split_to_json(const DatasetSplit& split);

DatasetSplit
split_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Modality selection
// ---------------------------------------------------------------------------

/// text -> 768 values, image -> 4096, multimodal -> text followed by image.
std::vector<double>
select_modality(const FeatureRecord& r, Modality m);

/// Writes the selected features into `out`, which must have modality_dim(m)
/// entries.
void
select_modality_into(const FeatureRecord& r, Modality m, std::span<double> out);

// ---------------------------------------------------------------------------
// Corpus manifest (JSON lines: {"id": ..., "path": ..., "label": 0|1})
// ---------------------------------------------------------------------------

struct ManifestEntry {
    std::string id;
    std::string path;
    Label label = Label::kNonHate;

    bool
    operator==(const ManifestEntry&) const = default;
};

/// Blank lines are skipped. Throws std::invalid_argument naming the line on
/// malformed rows or duplicate ids.
std::vector<ManifestEntry>
parse_manifest(std::string_view text);

std::vector<ManifestEntry>
read_manifest(const std::filesystem::path& path);

}  // namespace fusion
