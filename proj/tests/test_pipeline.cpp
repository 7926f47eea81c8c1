#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "thermofoot/errors.hpp"
#include "thermofoot/pipeline/config.hpp"
#include "thermofoot/pipeline/stages.hpp"

using namespace thermo;
using pipeline::PipelineConfig;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "thermofoot_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("config round-trips through serialization") {
  PipelineConfig cfg;
  cfg.seed = 1234;
  cfg.out_dir = "somewhere";
  cfg.synth.n_participants = 40;
  cfg.prediction.tasks = {{"t1", "mtcns", "regression", "thermal_only"}};
  const std::string text = cfg.to_json_text();
  const PipelineConfig back = PipelineConfig::from_json_text(text);
  CHECK(back.to_json_text() == text);
  CHECK(back.seed == 1234);
  CHECK(back.synth.n_participants == 40);
  CHECK(back.prediction.tasks.size() == 1);
  CHECK(back.hash() == cfg.hash());
}

TEST_CASE("unknown config keys are rejected by name") {
  const char* bad = R"({"seed": 1, "typo_key": true})";
  try {
    PipelineConfig::from_json_text(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
  }

  const char* nested = R"({"clustering": {"kmax": 5}})";
  CHECK_THROWS_AS(PipelineConfig::from_json_text(nested), ConfigError);
  const char* bad_task =
      R"({"prediction": {"tasks": [{"name":"x","target":"mtcns","kind":"foo","input":"thermal_only"}]}})";
  CHECK_THROWS_AS(PipelineConfig::from_json_text(bad_task), ConfigError);
}

TEST_CASE("stages fail with named prerequisites when run out of order") {
  const fs::path dir = temp_dir("stage_prereqs");
  PipelineConfig cfg;
  cfg.out_dir = dir.string();
  cfg.synth.n_participants = 4;
  cfg.synth.image_height = cfg.synth.image_width = 48;

  SUBCASE("cluster before represent names the latents") {
    try {
      pipeline::run_cluster(cfg);
      FAIL("expected MissingPrerequisite");
    } catch (const MissingPrerequisite& e) {
      CHECK(std::string(e.what()).find("latents") != std::string::npos);
    }
  }
  SUBCASE("segment before synth names the manifest") {
    CHECK_THROWS_AS(pipeline::run_segment(cfg), MissingPrerequisite);
  }
  SUBCASE("represent before segment names the masks") {
    pipeline::run_synth(cfg);
    try {
      pipeline::run_represent(cfg);
      FAIL("expected MissingPrerequisite");
    } catch (const MissingPrerequisite& e) {
      CHECK(std::string(e.what()).find("masks") != std::string::npos);
    }
  }
}

TEST_CASE("synth stage writes provenance with the config hash") {
  const fs::path dir = temp_dir("stage_provenance");
  PipelineConfig cfg;
  cfg.out_dir = dir.string();
  cfg.synth.n_participants = 3;
  cfg.synth.image_height = cfg.synth.image_width = 48;
  pipeline::run_synth(cfg);
  const std::string prov = slurp(dir / "synth" / "provenance.json");
  CHECK(prov.find(cfg.hash()) != std::string::npos);
  CHECK(prov.find("\"stage\": \"synth\"") != std::string::npos);
}

TEST_CASE("synth stage is deterministic across runs") {
  PipelineConfig cfg;
  cfg.synth.n_participants = 3;
  cfg.synth.image_height = cfg.synth.image_width = 48;
  const fs::path a = temp_dir("stage_det_a");
  const fs::path b = temp_dir("stage_det_b");
  cfg.out_dir = a.string();
  pipeline::run_synth(cfg);
  PipelineConfig cfg_b = cfg;
  cfg_b.out_dir = b.string();
  pipeline::run_synth(cfg_b);
  CHECK(slurp(a / "synth" / "manifest.csv") == slurp(b / "synth" / "manifest.csv"));
  CHECK(slurp(a / "synth" / "planted_truth.csv") ==
        slurp(b / "synth" / "planted_truth.csv"));
}

TEST_CASE("run_stage rejects unknown stages") {
  PipelineConfig cfg;
  CHECK_THROWS_AS(pipeline::run_stage("nonsense", cfg), ConfigError);
}
