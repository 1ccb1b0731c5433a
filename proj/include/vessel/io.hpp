#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vessel/volume.hpp"

namespace vessel::io {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// ---------------------------------------------------------------------------
// NIfTI-1 (single-file ".nii" form only; orientation matrices are ignored)

enum class Endianness { Little, Big };

namespace datatype {
inline constexpr std::int16_t kUint8 = 2;
inline constexpr std::int16_t kInt16 = 4;
inline constexpr std::int16_t kInt32 = 8;
inline constexpr std::int16_t kFloat32 = 16;
inline constexpr std::int16_t kUint16 = 512;
}  // namespace datatype

struct NiftiHeader {
  std::int32_t sizeof_hdr = 348;
  std::int16_t datatype = datatype::kUint8;
  std::int16_t bitpix = 8;
  std::array<std::int16_t, 8> dim{};
  std::array<float, 8> pixdim{};
  float vox_offset = 352.0f;
  float scl_slope = 1.0f;
  float scl_inter = 0.0f;
  std::array<char, 4> magic{'n', '+', '1', '\0'};
  Endianness endianness = Endianness::Little;
};

/// How stored values map onto vessel classes at ingestion.
struct ReadOptions {
  std::uint8_t hepatic_value = 1;
  std::uint8_t portal_value = 2;
  /// Map any other nonzero value to hepatic (1) instead of raising LabelRange.
  bool permissive = false;
};

struct NiftiImage {
  LabelVolume volume;
  NiftiHeader header;
};

/// Accepts plain or gzip-compressed streams (detected by the 1F 8B prefix).
NiftiImage read_nifti(ByteView stream, const ReadOptions& options = {});

/// Little-endian, uint8, magic "n+1", vox_offset 352, slope 1, intercept 0.
Bytes write_nifti(const LabelVolume& v);
Bytes write_nifti(const BinaryMask& m);

NiftiHeader parse_nifti_header(ByteView stream);

// ---------------------------------------------------------------------------
// gzip

bool is_gzip(ByteView data);
Bytes gzip_compress(ByteView data);
Bytes gzip_decompress(ByteView data);

// ---------------------------------------------------------------------------
// Raw container: JSON sidecar plus x-fastest u8 body

struct RawContainer {
  std::string sidecar;
  Bytes body;
};

RawContainer write_raw_container(const LabelVolume& v);
LabelVolume read_raw_container(std::string_view sidecar, ByteView body,
                               const ReadOptions& options = {});

// ---------------------------------------------------------------------------
// Evaluation reports

struct ReportRecord {
  std::string case_id;
  std::map<std::string, std::optional<double>> metrics;  // nullopt = undefined
  std::map<double, std::optional<double>> area_curve;
  std::map<double, std::optional<double>> length_curve;

  bool operator==(const ReportRecord&) const = default;
};

enum class ReportFormat { Json, Csv };

/// CSV columns: case_id, clDice, DSC, IoU, NSD, Area_d{delta}..., Length_d{delta}...
/// Numbers use fixed 6-decimal formatting; undefined values are empty
/// cells in CSV and null in JSON.
std::string write_report(std::span<const ReportRecord> records, ReportFormat format);
std::vector<ReportRecord> parse_report_json(std::string_view text);

/// Shortest decimal spelling of a delta, e.g. 5 -> "5", 1.5 -> "1.5".
std::string format_delta(double delta);
/// Fixed 6-decimal spelling.
std::string format_value(double v);

// ---------------------------------------------------------------------------
// Files, dispatched on extension: .nii, .nii.gz, or a .json/.raw pair.

LabelVolume load_volume(const std::filesystem::path& path, const ReadOptions& options = {});
void save_volume(const std::filesystem::path& path, const LabelVolume& v);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteView bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace vessel::io
