#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "thermofoot/errors.hpp"
#include "thermofoot/ingest/ingest.hpp"
#include "thermofoot/io/image_io.hpp"
#include "thermofoot/synth/generator.hpp"

using namespace thermo;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "thermofoot_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ParticipantRecord sample_record() {
  ParticipantRecord r;
  r.participant_id = "P0001";
  r.age = 57.5;
  r.sex = Sex::male;
  r.diabetes_duration = 6.0;
  r.mtcns = 6;
  r.tbi = 0.83;
  r.pad_clinical_history = false;
  r.prior_ulcer = false;
  r.prior_amputation = false;
  r.complications = std::set<std::string>{"neuropathy"};
  r.physical_impairment = true;
  r.visual_impairment = false;
  r.monofilament_insensitive = true;
  r.pinprick = ExamResult::normal;
  r.light_touch = ExamResult::impaired;
  return r;
}

}  // namespace

TEST_CASE("manifest round-trips field-for-field") {
  const fs::path dir = temp_dir("manifest_roundtrip");
  Manifest m;
  m.base_dir = dir.string();
  for (int i = 0; i < 5; ++i) {
    ManifestEntry e;
    e.participant_id = "P000" + std::to_string(i + 1);
    e.visual_path = "images/" + e.participant_id + "_visual.png";
    e.thermal_path = "images/" + e.participant_id + "_thermal.f32";
    e.record = sample_record();
    e.record.participant_id = e.participant_id;
    if (i == 2) {  // one record with missing fields stays missing
      e.record.mtcns.reset();
      e.record.tbi.reset();
      e.record.complications.reset();
      e.record.pinprick.reset();
    }
    m.entries.push_back(e);
  }
  const std::string path = (dir / "manifest.csv").string();
  ingest::save_manifest(m, path);
  const Manifest loaded = ingest::load_manifest(path, /*check_files=*/false);
  REQUIRE(loaded.entries.size() == m.entries.size());
  for (std::size_t i = 0; i < m.entries.size(); ++i)
    CHECK(loaded.entries[i] == m.entries[i]);
}

TEST_CASE("load_manifest loads a generated cohort and preserves row count") {
  const fs::path dir = temp_dir("manifest_cohort");
  synth::CohortSpec spec;
  spec.n_participants = 8;
  spec.image_height = spec.image_width = 64;
  spec.seed = 11;
  const auto paths = synth::generate_cohort(spec, dir.string());
  const Manifest m = ingest::load_manifest(paths.manifest);
  CHECK(m.entries.size() == 8);
}

TEST_CASE("empty manifest file is a SchemaMismatch") {
  const fs::path dir = temp_dir("manifest_empty");
  const std::string path = (dir / "manifest.csv").string();
  std::ofstream(path) << "";
  CHECK_THROWS_AS(ingest::load_manifest(path), SchemaMismatch);
}

TEST_CASE("duplicate participant id is reported by name") {
  const fs::path dir = temp_dir("manifest_dup");
  Manifest m;
  ManifestEntry e;
  e.participant_id = "P0007";
  e.visual_path = "v.png";
  e.thermal_path = "t.f32";
  e.record.participant_id = "P0007";
  m.entries = {e, e};
  const std::string path = (dir / "manifest.csv").string();
  ingest::save_manifest(m, path);
  try {
    ingest::load_manifest(path, /*check_files=*/false);
    FAIL("expected DuplicateId");
  } catch (const DuplicateId& ex) {
    CHECK(std::string(ex.what()).find("P0007") != std::string::npos);
  }
}

TEST_CASE("schema mismatch names the offending column") {
  const fs::path dir = temp_dir("manifest_badcol");
  const std::string path = (dir / "manifest.csv").string();
  std::ofstream out(path);
  auto cols = ingest::manifest_columns();
  cols[3] = "years";  // should be "age"
  for (std::size_t i = 0; i < cols.size(); ++i)
    out << (i ? "," : "") << cols[i];
  out << "\n";
  out.close();
  try {
    ingest::load_manifest(path, false);
    FAIL("expected SchemaMismatch");
  } catch (const SchemaMismatch& ex) {
    CHECK(std::string(ex.what()).find("age") != std::string::npos);
  }
}

TEST_CASE("unparseable rows are reported with row numbers") {
  const fs::path dir = temp_dir("manifest_badrow");
  Manifest m;
  ManifestEntry e;
  e.participant_id = "P0001";
  e.visual_path = "v.png";
  e.thermal_path = "t.f32";
  m.entries = {e};
  const std::string path = (dir / "manifest.csv").string();
  ingest::save_manifest(m, path);
  std::ofstream out(path, std::ios::app);
  out << "P0002,v.png,t.f32,notanumber,,,,,,,,,,,,,,,,\n";
  out.close();
  try {
    ingest::load_manifest(path, false);
    FAIL("expected SchemaMismatch");
  } catch (const SchemaMismatch& ex) {
    const std::string msg = ex.what();
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("age") != std::string::npos);
  }
}

TEST_CASE("load_image_pair enforces registration and finiteness") {
  const fs::path dir = temp_dir("image_pair");
  fs::create_directories(dir / "images");

  VisualImage vis;
  vis.height = vis.width = 32;
  vis.pixels.assign(32 * 32 * 3, 100);
  io::write_png_rgb((dir / "images/a_visual.png").string(), vis);

  ThermalGrid good;
  good.height = good.width = 32;
  good.values.assign(32 * 32, 30.0f);
  io::write_thermal((dir / "images/a_thermal.f32").string(), good);

  ManifestEntry e;
  e.participant_id = "a";
  e.visual_path = "images/a_visual.png";
  e.thermal_path = "images/a_thermal.f32";

  SUBCASE("happy path") {
    const ImagePair p = ingest::load_image_pair(e, dir.string());
    CHECK(p.thermal.height == 32);
    CHECK(p.visual.width == 32);
  }
  SUBCASE("dimension mismatch") {
    ThermalGrid small;
    small.height = 16;
    small.width = 24;
    small.values.assign(16 * 24, 30.0f);
    io::write_thermal((dir / "images/a_thermal.f32").string(), small);
    CHECK_THROWS_AS(ingest::load_image_pair(e, dir.string()), DimensionMismatch);
  }
  SUBCASE("NaN temperature") {
    ThermalGrid bad = good;
    bad.values[10] = std::numeric_limits<float>::quiet_NaN();
    io::write_thermal((dir / "images/a_thermal.f32").string(), bad);
    CHECK_THROWS_AS(ingest::load_image_pair(e, dir.string()),
                    NonFiniteTemperature);
  }
}

TEST_CASE("normalize_thermal maps the window to the unit interval") {
  ThermalGrid g;
  g.height = 1;
  g.width = 5;
  g.values = {30.0f, 20.0f, 40.0f, 45.0f, 10.0f};
  const auto out = ingest::normalize_thermal(g, {20.0, 40.0});
  CHECK(out[0] == doctest::Approx(0.5));
  CHECK(out[1] == 0.0f);
  CHECK(out[2] == 1.0f);
  CHECK(out[3] == 1.0f);  // clipped above
  CHECK(out[4] == 0.0f);  // clipped below

  SUBCASE("degenerate window") {
    CHECK_THROWS_AS(ingest::normalize_thermal(g, {40.0, 40.0}), DegenerateWindow);
    CHECK_THROWS_AS(ingest::normalize_thermal(g, {41.0, 40.0}), DegenerateWindow);
  }
  SUBCASE("idempotent on already-normalized data with unit window") {
    ThermalGrid unit;
    unit.height = 1;
    unit.width = 3;
    unit.values = {0.0f, 0.25f, 1.0f};
    const auto once = ingest::normalize_thermal(unit, {0.0, 1.0});
    ThermalGrid again;
    again.height = 1;
    again.width = 3;
    again.values = once;
    const auto twice = ingest::normalize_thermal(again, {0.0, 1.0});
    CHECK(once == twice);
  }
}

TEST_CASE("normalize_thermal is monotone in the input value") {
  ThermalGrid g;
  g.height = 1;
  g.width = 100;
  for (int i = 0; i < 100; ++i)
    g.values.push_back(15.0f + 0.35f * static_cast<float>(i));
  const auto out = ingest::normalize_thermal(g, {20.0, 40.0});
  for (int i = 1; i < 100; ++i) CHECK(out[i] >= out[i - 1]);
}

TEST_CASE("validate_record flags out-of-range fields by name") {
  ParticipantRecord r = sample_record();
  CHECK(ingest::validate_record(r).empty());

  r.mtcns = 40;
  auto v = ingest::validate_record(r);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("mtcns") != std::string::npos);

  r = sample_record();
  r.tbi = -0.1;
  v = ingest::validate_record(r);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("tbi") != std::string::npos);
}

TEST_CASE("loading never mutates files") {
  const fs::path dir = temp_dir("manifest_nomutate");
  synth::CohortSpec spec;
  spec.n_participants = 3;
  spec.image_height = spec.image_width = 48;
  spec.seed = 3;
  const auto paths = synth::generate_cohort(spec, dir.string());
  auto read_all = [&](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  const std::string before = read_all(paths.manifest);
  const Manifest m = ingest::load_manifest(paths.manifest);
  for (const auto& e : m.entries) (void)ingest::load_image_pair(e, m.base_dir);
  CHECK(read_all(paths.manifest) == before);
}
