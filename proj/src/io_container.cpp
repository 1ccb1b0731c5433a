#include <fstream>

#include "json.hpp"
#include "vessel/io.hpp"

namespace vessel::io {

using nlohmann::json;

RawContainer write_raw_container(const LabelVolume& v) {
  const auto& d = v.dims();
  const auto& s = v.spacing();
  json sidecar = {
      {"dims", {d.nx, d.ny, d.nz}},
      {"spacing_mm", {s.dx(), s.dy(), s.dz()}},
      {"dtype", "u8"},
      {"order", "x-fastest"},
  };
  return {sidecar.dump(2) + "\n", Bytes(v.labels().begin(), v.labels().end())};
}

LabelVolume read_raw_container(std::string_view sidecar, ByteView body,
                               const ReadOptions& options) {
  json j;
  try {
    j = json::parse(sidecar);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("sidecar is not valid JSON: ") + e.what());
  }
  const auto require = [&](const char* key) -> const json& {
    if (!j.is_object() || !j.contains(key)) {
      throw Error(ErrorCode::SchemaError, std::string("sidecar missing \"") + key + "\"");
    }
    return j.at(key);
  };
  const auto triple = [&](const char* key, bool integral) {
    const json& v = require(key);
    if (!v.is_array() || v.size() != 3) {
      throw Error(ErrorCode::SchemaError, std::string("\"") + key + "\" must be a 3-element array");
    }
    for (const auto& e : v) {
      if (integral ? !e.is_number_integer() : !e.is_number()) {
        throw Error(ErrorCode::SchemaError, std::string("\"") + key + "\" has a non-numeric entry");
      }
    }
    return v;
  };

  const json& dims_j = triple("dims", true);
  const json& spacing_j = triple("spacing_mm", false);
  if (require("dtype") != "u8") throw Error(ErrorCode::SchemaError, "dtype must be \"u8\"");
  if (require("order") != "x-fastest") {
    throw Error(ErrorCode::SchemaError, "order must be \"x-fastest\"");
  }

  const Dims dims{dims_j[0].get<std::int64_t>(), dims_j[1].get<std::int64_t>(),
                  dims_j[2].get<std::int64_t>()};
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) {
    throw Error(ErrorCode::BadDims, "sidecar dims " + to_string(dims));
  }
  const Spacing spacing(spacing_j[0].get<double>(), spacing_j[1].get<double>(),
                        spacing_j[2].get<double>());
  if (body.size() != dims.size()) {
    throw Error(ErrorCode::LengthMismatch, "body has " + std::to_string(body.size()) +
                                               " bytes, dims imply " + std::to_string(dims.size()));
  }
  std::vector<std::uint8_t> labels(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    const auto b = body[i];
    if (b == 0) {
      labels[i] = 0;
    } else if (b == options.hepatic_value) {
      labels[i] = 1;
    } else if (b == options.portal_value) {
      labels[i] = 2;
    } else if (options.permissive) {
      labels[i] = 1;
    } else {
      throw Error(ErrorCode::LabelRange, "value " + std::to_string(b) + " at voxel " +
                                             std::to_string(i) + " is not a vessel label");
    }
  }
  return LabelVolume(dims, spacing, std::move(labels));
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace {

enum class FileKind { Nifti, NiftiGz, Container };

FileKind kind_of(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  const auto ends_with = [&](std::string_view suffix) {
    return name.size() >= suffix.size() &&
           name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".nii.gz")) return FileKind::NiftiGz;
  if (ends_with(".nii")) return FileKind::Nifti;
  if (ends_with(".json") || ends_with(".raw")) return FileKind::Container;
  throw Error(ErrorCode::IoFailure,
              "unrecognized volume extension for " + name + " (want .nii, .nii.gz, .json/.raw)");
}

}  // namespace

LabelVolume load_volume(const std::filesystem::path& path, const ReadOptions& options) {
  switch (kind_of(path)) {
    case FileKind::Nifti:
    case FileKind::NiftiGz: {
      const auto bytes = read_file(path);
      return read_nifti(bytes, options).volume;
    }
    case FileKind::Container: {
      auto sidecar_path = path;
      auto body_path = path;
      sidecar_path.replace_extension(".json");
      body_path.replace_extension(".raw");
      const auto sidecar = read_file(sidecar_path);
      const auto body = read_file(body_path);
      return read_raw_container(
          std::string_view(reinterpret_cast<const char*>(sidecar.data()), sidecar.size()), body,
          options);
    }
  }
  return LabelVolume(Dims{}, Spacing{}, {0});
}

void save_volume(const std::filesystem::path& path, const LabelVolume& v) {
  switch (kind_of(path)) {
    case FileKind::Nifti:
      write_file(path, write_nifti(v));
      return;
    case FileKind::NiftiGz:
      write_file(path, gzip_compress(write_nifti(v)));
      return;
    case FileKind::Container: {
      const auto c = write_raw_container(v);
      auto sidecar_path = path;
      auto body_path = path;
      sidecar_path.replace_extension(".json");
      body_path.replace_extension(".raw");
      write_file(sidecar_path, c.sidecar);
      write_file(body_path, c.body);
      return;
    }
  }
}

}  // namespace vessel::io
