#include <zlib.h>

#include "vessel/io.hpp"

namespace vessel::io {

namespace {
constexpr int kGzipWindow = 15 + 16;  // zlib: 15-bit window with gzip wrapper
constexpr std::size_t kChunk = 1 << 16;
}  // namespace

bool is_gzip(ByteView data) { return data.size() >= 2 && data[0] == 0x1F && data[1] == 0x8B; }

Bytes gzip_compress(ByteView data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, kGzipWindow, 8, Z_DEFAULT_STRATEGY) !=
      Z_OK) {
    throw Error(ErrorCode::IoFailure, "deflateInit2 failed");
  }
  Bytes out(deflateBound(&zs, static_cast<uLong>(data.size())) + 32);
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::IoFailure, "gzip compression failed");
  out.resize(produced);
  return out;
}

Bytes gzip_decompress(ByteView data) {
  z_stream zs{};
  if (inflateInit2(&zs, kGzipWindow) != Z_OK) {
    throw Error(ErrorCode::IoFailure, "inflateInit2 failed");
  }
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  Bytes out;
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    const std::size_t have = out.size();
    out.resize(have + kChunk);
    zs.next_out = out.data() + have;
    zs.avail_out = static_cast<uInt>(kChunk);
    rc = inflate(&zs, Z_NO_FLUSH);
    out.resize(have + kChunk - zs.avail_out);
    if (rc == Z_STREAM_END) break;
    if (rc != Z_OK) {
      inflateEnd(&zs);
      throw Error(ErrorCode::TruncatedData, "gzip stream is corrupt or truncated");
    }
    if (zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw Error(ErrorCode::TruncatedData, "gzip stream ended early");
    }
  }
  inflateEnd(&zs);
  return out;
}

}  // namespace vessel::io
