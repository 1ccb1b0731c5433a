#include <filesystem>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "nifti_fixture.hpp"
#include "vessel/error.hpp"
#include "vessel/io.hpp"

using namespace vessel;
using namespace vessel::io;

namespace {

LabelVolume random_labels(std::mt19937_64& rng, Dims d, Spacing s) {
  std::uniform_int_distribution<int> u(0, 2);
  std::vector<std::uint8_t> v(d.size());
  for (auto& x : v) x = static_cast<std::uint8_t>(u(rng));
  return LabelVolume(d, s, std::move(v));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected vessel::Error");
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("nifti writer layout") {
  const auto one = BinaryMask::full({1, 1, 1});
  const auto bytes = write_nifti(one);
  CHECK(bytes.size() == 353);
  CHECK(parse_nifti_header(bytes).sizeof_hdr == 348);
  CHECK(bytes[344] == 'n');
  CHECK(bytes[345] == '+');
  CHECK(bytes[346] == '1');
  CHECK(bytes[352] == 1);
  CHECK(write_nifti(one) == bytes);
  CHECK(code_of([] { write_nifti(BinaryMask::empty({40000, 1, 1})); }) == ErrorCode::DimsTooLarge);
}

TEST_CASE("nifti round-trips, plain and gzip") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 6; ++t) {
    const Dims d{1 + t * 7, 2 + t * 3, 1 + t * 5};
    const double xy[] = {0.54, 0.6, 0.7, 0.79, 0.65, 0.58};
    const Spacing s(xy[t], 0.79, 2.0 + 0.25 * t);
    const auto v = random_labels(rng, d, s);
    const auto plain = write_nifti(v);
    const auto img = read_nifti(plain);
    CHECK(img.volume == v);
    CHECK(img.volume.spacing() == s);
    const auto gz = gzip_compress(plain);
    CHECK(is_gzip(gz));
    CHECK(read_nifti(gz).volume == v);
    CHECK(gzip_decompress(gz) == plain);
  }
}

TEST_CASE("nifti spacing is stored as float32") {
  // A double with no short spelling comes back as its float's shortest decimal.
  const LabelVolume v({1, 1, 1}, Spacing(0.54 + 0.15, 1.0, 3.2), std::vector<std::uint8_t>{1});
  const auto back = read_nifti(write_nifti(v)).volume;
  CHECK(back.spacing() == Spacing(0.69, 1.0, 3.2));
  CHECK(back.labels()[0] == 1);
}

TEST_CASE("nifti datatypes, scaling and byte order") {
  const std::vector<double> vals{0, 1, 2, 0, 2, 1, 1, 0};
  std::vector<std::uint8_t> expect(vals.begin(), vals.end());
  const LabelVolume ref({2, 2, 2}, Spacing(0.7, 0.8, 2.5), expect);
  for (std::int16_t dt : {2, 4, 512, 8, 16}) {
    for (bool big : {false, true}) {
      fixture::NiftiSpec spec;
      spec.dims = {2, 2, 2};
      spec.pixdim = {0.7f, 0.8f, 2.5f};
      spec.datatype = dt;
      spec.big_endian = big;
      const auto img = read_nifti(fixture::make_nifti(spec, vals));
      CHECK(img.volume == ref);
      CHECK(img.header.datatype == dt);
      CHECK((img.header.endianness == Endianness::Big) == big);
    }
  }
  // Stored 0, 10, 20 with slope 0.1 read back as 0, 1, 2.
  fixture::NiftiSpec scaled;
  scaled.dims = {3, 1, 1};
  scaled.datatype = 4;
  scaled.slope = 0.1f;
  const auto img = read_nifti(fixture::make_nifti(scaled, {0, 10, 20}));
  CHECK(img.volume.labels()[1] == 1);
  CHECK(img.volume.labels()[2] == 2);
  // 1.5 rounds away from zero to 2.
  fixture::NiftiSpec flt;
  flt.dims = {2, 1, 1};
  flt.datatype = 16;
  CHECK(read_nifti(fixture::make_nifti(flt, {0.49, 1.5})).volume.labels()[1] == 2);
}

TEST_CASE("nifti label options") {
  fixture::NiftiSpec spec;
  spec.dims = {4, 1, 1};
  const auto bytes = fixture::make_nifti(spec, {0, 7, 9, 3});
  CHECK(code_of([&] { read_nifti(bytes); }) == ErrorCode::LabelRange);
  const auto perm = read_nifti(bytes, ReadOptions{1, 2, true});
  CHECK(perm.volume.labels()[1] == 1);
  CHECK(perm.volume.labels()[3] == 1);
  const auto mapped = read_nifti(bytes, ReadOptions{7, 9, true});
  CHECK(mapped.volume.labels()[1] == 1);
  CHECK(mapped.volume.labels()[2] == 2);
  CHECK(mapped.volume.labels()[3] == 1);
}

TEST_CASE("malformed nifti streams") {
  fixture::NiftiSpec spec;
  spec.dims = {2, 2, 2};
  const std::vector<double> vals(8, 1.0);

  auto bad_magic = spec;
  bad_magic.magic = "abc";
  CHECK(code_of([&] { read_nifti(fixture::make_nifti(bad_magic, vals)); }) == ErrorCode::BadMagic);
  auto pair = spec;
  pair.magic = "ni1";
  CHECK(code_of([&] { read_nifti(fixture::make_nifti(pair, vals)); }) == ErrorCode::BadMagic);

  auto wrong_size = fixture::make_nifti(spec, vals);
  wrong_size[0] = 99;
  CHECK(code_of([&] { read_nifti(wrong_size); }) == ErrorCode::BadMagic);

  auto f64 = spec;
  f64.datatype = 64;
  CHECK(code_of([&] { read_nifti(fixture::make_nifti(f64, vals)); }) ==
        ErrorCode::UnsupportedDatatype);

  auto full = fixture::make_nifti(spec, vals);
  full.pop_back();
  CHECK(code_of([&] { read_nifti(full); }) == ErrorCode::TruncatedData);
  CHECK(code_of([] { read_nifti(Bytes(100, 0)); }) == ErrorCode::TruncatedData);

  const auto gz = gzip_compress(fixture::make_nifti(spec, vals));
  const Bytes cut(gz.begin(), gz.begin() + static_cast<std::ptrdiff_t>(gz.size() / 2));
  CHECK_THROWS_AS(read_nifti(cut), Error);
}

TEST_CASE("raw container") {
  std::mt19937_64 rng(8);
  const auto v = random_labels(rng, {5, 4, 3}, Spacing(0.6, 0.6, 3.2));
  const auto c = write_raw_container(v);
  CHECK(read_raw_container(c.sidecar, c.body) == v);
  CHECK(read_raw_container(c.sidecar, c.body).spacing() == v.spacing());

  auto j = nlohmann::json::parse(c.sidecar);
  CHECK(j["order"] == "x-fastest");
  CHECK(j["dtype"] == "u8");
  j.erase("spacing_mm");
  CHECK(code_of([&] { read_raw_container(j.dump(), c.body); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { read_raw_container("{not json", c.body); }) == ErrorCode::SchemaError);

  Bytes short_body(c.body.begin(), c.body.end() - 1);
  CHECK(code_of([&] { read_raw_container(c.sidecar, short_body); }) == ErrorCode::LengthMismatch);

  Bytes bad = c.body;
  bad[0] = 5;
  CHECK(code_of([&] { read_raw_container(c.sidecar, bad); }) == ErrorCode::LabelRange);
}

TEST_CASE("volume files by extension") {
  const auto dir = std::filesystem::temp_directory_path() / "vessel_io_test";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(13);
  const auto v = random_labels(rng, {6, 5, 4}, Spacing(0.8, 0.8, 1.5));
  for (const char* name : {"a.nii", "b.nii.gz", "c.json"}) {
    save_volume(dir / name, v);
    CHECK(load_volume(dir / name) == v);
  }
  CHECK(std::filesystem::exists(dir / "c.raw"));
  CHECK(code_of([&] { load_volume(dir / "missing.nii"); }) == ErrorCode::IoFailure);
  std::filesystem::remove_all(dir);
}

TEST_CASE("reports") {
  ReportRecord r;
  r.case_id = "case01";
  for (const char* m : {"clDice", "DSC", "IoU", "NSD"}) r.metrics[m] = 1.0;
  for (double d : {1.0, 5.0}) {
    r.area_curve[d] = 1.0;
    r.length_curve[d] = 1.0;
  }
  const std::vector<ReportRecord> one{r};
  CHECK(write_report(one, ReportFormat::Csv) ==
        "case_id,clDice,DSC,IoU,NSD,Area_d1,Area_d5,Length_d1,Length_d5\n"
        "case01,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000\n");
  CHECK(code_of([] { write_report({}, ReportFormat::Json); }) == ErrorCode::EmptyInput);

  auto r2 = r;
  r2.case_id = "case02";
  r2.metrics["NSD"] = std::nullopt;
  r2.area_curve[1.0] = 0.25;
  const std::vector<ReportRecord> two{r, r2};
  const auto csv = write_report(two, ReportFormat::Csv);
  CHECK(csv.find("case02,1.000000,1.000000,1.000000,,0.250000") != std::string::npos);
  CHECK(parse_report_json(write_report(two, ReportFormat::Json)) == two);

  auto bad = r;
  bad.metrics["IoU"] = 1.5;
  const std::vector<ReportRecord> b{bad};
  CHECK(code_of([&] { write_report(b, ReportFormat::Json); }) == ErrorCode::SchemaError);

  CHECK(format_delta(5.0) == "5");
  CHECK(format_delta(1.5) == "1.5");
  CHECK(format_value(1.0 / 3.0) == "0.333333");
}
