#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>

#include "vessel/io.hpp"

namespace vessel::io {

namespace {

constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kVoxOffset = 352;

namespace offset {
constexpr std::size_t sizeof_hdr = 0;
constexpr std::size_t dim = 40;
constexpr std::size_t datatype = 70;
constexpr std::size_t bitpix = 72;
constexpr std::size_t pixdim = 76;
constexpr std::size_t vox_offset = 108;
constexpr std::size_t scl_slope = 112;
constexpr std::size_t scl_inter = 116;
constexpr std::size_t xyzt_units = 123;
constexpr std::size_t magic = 344;
}  // namespace offset

// Reads a fixed-width scalar stored with the given byte order.
class FieldReader {
public:
  FieldReader(ByteView data, bool swap) : data_(data), swap_(swap) {}

  template <typename T>
  T get(std::size_t pos) const {
    std::array<std::uint8_t, sizeof(T)> raw{};
    std::memcpy(raw.data(), data_.data() + pos, sizeof(T));
    if (swap_) std::reverse(raw.begin(), raw.end());
    T v;
    std::memcpy(&v, raw.data(), sizeof(T));
    return v;
  }

private:
  ByteView data_;
  bool swap_;
};

template <typename T>
void put_le(Bytes& out, std::size_t pos, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  std::array<std::uint8_t, sizeof(T)> raw{};
  std::memcpy(raw.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  std::memcpy(out.data() + pos, raw.data(), sizeof(T));
}

std::size_t bytes_per_voxel(std::int16_t dt) {
  switch (dt) {
    case datatype::kUint8: return 1;
    case datatype::kInt16:
    case datatype::kUint16: return 2;
    case datatype::kInt32:
    case datatype::kFloat32: return 4;
    default: return 0;
  }
}

// pixdim is stored as float32. Widening through the float's shortest decimal
// spelling returns 0.7 for 0.7f rather than 0.699999988.
double widen(float f) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, f);
  double d = 0.0;
  std::from_chars(buf, res.ptr, d);
  return d;
}

std::uint8_t to_label(double raw, const ReadOptions& options, std::size_t index) {
  if (!std::isfinite(raw)) {
    throw Error(ErrorCode::LabelRange, "non-finite value at voxel " + std::to_string(index));
  }
  const double r = std::round(raw);  // half away from zero
  if (r == 0.0) return 0;
  if (r == options.hepatic_value) return 1;
  if (r == options.portal_value) return 2;
  if (options.permissive) return 1;
  throw Error(ErrorCode::LabelRange,
              "value " + std::to_string(r) + " at voxel " + std::to_string(index) +
                  " is not a vessel label");
}

}  // namespace

NiftiHeader parse_nifti_header(ByteView data) {
  if (data.size() < kHeaderSize) {
    throw Error(ErrorCode::TruncatedData, "stream shorter than the 348-byte NIfTI-1 header");
  }
  NiftiHeader h;
  bool swap = false;
  if (FieldReader(data, false).get<std::int32_t>(offset::sizeof_hdr) != 348) {
    if (FieldReader(data, true).get<std::int32_t>(offset::sizeof_hdr) != 348) {
      throw Error(ErrorCode::BadMagic, "sizeof_hdr is not 348 in either byte order");
    }
    swap = true;
  }
  // Byte order is reported relative to the stream, not the host.
  const bool host_little = std::endian::native == std::endian::little;
  h.endianness = (host_little != swap) ? Endianness::Little : Endianness::Big;

  std::memcpy(h.magic.data(), data.data() + offset::magic, 4);
  const std::string_view magic(h.magic.data(), 4);
  if (magic == std::string_view("ni1\0", 4)) {
    throw Error(ErrorCode::BadMagic, "header/image pair form (ni1) is not supported");
  }
  if (magic != std::string_view("n+1\0", 4)) {
    throw Error(ErrorCode::BadMagic, "magic is not \"n+1\"");
  }

  const FieldReader r(data, swap);
  h.sizeof_hdr = 348;
  h.datatype = r.get<std::int16_t>(offset::datatype);
  h.bitpix = r.get<std::int16_t>(offset::bitpix);
  for (int i = 0; i < 8; ++i) {
    h.dim[i] = r.get<std::int16_t>(offset::dim + 2 * i);
    h.pixdim[i] = r.get<float>(offset::pixdim + 4 * i);
  }
  h.vox_offset = r.get<float>(offset::vox_offset);
  h.scl_slope = r.get<float>(offset::scl_slope);
  h.scl_inter = r.get<float>(offset::scl_inter);
  return h;
}

NiftiImage read_nifti(ByteView stream, const ReadOptions& options) {
  Bytes inflated;
  ByteView data = stream;
  if (is_gzip(stream)) {
    inflated = gzip_decompress(stream);
    data = inflated;
  }
  const NiftiHeader h = parse_nifti_header(data);
  const bool swap = (h.endianness == Endianness::Little) != (std::endian::native == std::endian::little);

  const std::size_t bpv = bytes_per_voxel(h.datatype);
  if (bpv == 0) {
    throw Error(ErrorCode::UnsupportedDatatype, "datatype code " + std::to_string(h.datatype));
  }

  const int ndim = h.dim[0];
  if (ndim < 1 || ndim > 7) {
    throw Error(ErrorCode::BadDims, "dim[0] = " + std::to_string(ndim));
  }
  for (int i = 4; i <= ndim; ++i) {
    if (h.dim[i] != 1) {
      throw Error(ErrorCode::BadDims, "only 3D volumes are supported (dim[" + std::to_string(i) +
                                          "] = " + std::to_string(h.dim[i]) + ")");
    }
  }
  std::array<std::int64_t, 3> n{1, 1, 1};
  std::array<double, 3> sp{1.0, 1.0, 1.0};
  for (int a = 0; a < 3 && a < ndim; ++a) {
    n[a] = h.dim[a + 1];
    sp[a] = std::abs(widen(h.pixdim[a + 1]));
  }
  const Dims dims{n[0], n[1], n[2]};
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) {
    throw Error(ErrorCode::BadDims, "non-positive dimension " + to_string(dims));
  }
  const Spacing spacing(sp[0], sp[1], sp[2]);

  if (!(h.vox_offset >= static_cast<float>(kHeaderSize))) {
    throw Error(ErrorCode::TruncatedData, "vox_offset " + std::to_string(h.vox_offset) +
                                              " points inside the header");
  }
  const auto start = static_cast<std::size_t>(h.vox_offset);
  const std::size_t need = start + dims.size() * bpv;
  if (data.size() < need) {
    throw Error(ErrorCode::TruncatedData, "expected " + std::to_string(need) + " bytes, got " +
                                              std::to_string(data.size()));
  }

  const bool scaled = h.scl_slope != 0.0f && !(h.scl_slope == 1.0f && h.scl_inter == 0.0f);
  const double slope = h.scl_slope;
  const double inter = h.scl_inter;
  const FieldReader r(data, swap);

  std::vector<std::uint8_t> labels(dims.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t pos = start + i * bpv;
    double raw = 0.0;
    switch (h.datatype) {
      case datatype::kUint8: raw = data[pos]; break;
      case datatype::kInt16: raw = r.get<std::int16_t>(pos); break;
      case datatype::kUint16: raw = r.get<std::uint16_t>(pos); break;
      case datatype::kInt32: raw = r.get<std::int32_t>(pos); break;
      case datatype::kFloat32: raw = r.get<float>(pos); break;
    }
    if (scaled) raw = raw * slope + inter;
    labels[i] = to_label(raw, options, i);
  }
  return {LabelVolume(dims, spacing, std::move(labels)), h};
}

Bytes write_nifti(const LabelVolume& v) {
  const Dims d = v.dims();
  constexpr auto kMax = std::numeric_limits<std::int16_t>::max();
  if (d.nx > kMax || d.ny > kMax || d.nz > kMax) {
    throw Error(ErrorCode::DimsTooLarge, to_string(d) + " does not fit NIfTI-1 int16 dims");
  }
  Bytes out(kVoxOffset + d.size(), 0);
  put_le<std::int32_t>(out, offset::sizeof_hdr, 348);
  const std::array<std::int16_t, 8> dim{3, static_cast<std::int16_t>(d.nx),
                                        static_cast<std::int16_t>(d.ny),
                                        static_cast<std::int16_t>(d.nz), 1, 1, 1, 1};
  const std::array<float, 8> pixdim{1.0f,
                                    static_cast<float>(v.spacing().dx()),
                                    static_cast<float>(v.spacing().dy()),
                                    static_cast<float>(v.spacing().dz()),
                                    1.0f, 1.0f, 1.0f, 1.0f};
  for (int i = 0; i < 8; ++i) {
    put_le<std::int16_t>(out, offset::dim + 2 * i, dim[i]);
    put_le<float>(out, offset::pixdim + 4 * i, pixdim[i]);
  }
  put_le<std::int16_t>(out, offset::datatype, datatype::kUint8);
  put_le<std::int16_t>(out, offset::bitpix, 8);
  put_le<float>(out, offset::vox_offset, static_cast<float>(kVoxOffset));
  put_le<float>(out, offset::scl_slope, 1.0f);
  put_le<float>(out, offset::scl_inter, 0.0f);
  out[offset::xyzt_units] = 2;  // mm
  std::memcpy(out.data() + offset::magic, "n+1\0", 4);
  std::copy(v.labels().begin(), v.labels().end(), out.begin() + kVoxOffset);
  return out;
}

Bytes write_nifti(const BinaryMask& m) { return write_nifti(LabelVolume::from_mask(m)); }

}  // namespace vessel::io
