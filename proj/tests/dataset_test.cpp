#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "poursim/dataset/groundtruth.hpp"
#include "poursim/dataset/loader.hpp"
#include "poursim/dataset/schema.hpp"
#include "support/fixtures.hpp"

using namespace poursim::dataset;
namespace pour = poursim::pouring;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("poursim_dataset_" + std::string(tag) + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

const char* kGoodLine =
    R"({"image_id":"img-1","width":640,"height":480,"containers":[)"
    R"({"bbox":[10,20,100,200],"volume_ml":250,"content":"50","cad_id":"cup","upright":true},)"
    R"({"bbox":[200,40,80,120],"volume_ml":500,"content":"opaque","cad_id":"cup","upright":false}]})";

ContainerAnnotation ann(double volume, ContentClass content,
                        const char* image = "img") {
  ContainerAnnotation a;
  a.image_id = image;
  a.bbox = {0, 0, 50, 50};
  a.volume_ml = volume;
  a.content = content;
  a.cad_id = "cup";
  return a;
}

}  // namespace

TEST_CASE("content classes map labels and fractions") {
  CHECK(content_label(ContentClass::k33) == "33");
  CHECK(parse_content("opaque") == ContentClass::kOpaque);
  CHECK_FALSE(parse_content("67").has_value());

  CHECK(content_fraction(ContentClass::kEmpty) == 0.0);
  CHECK(content_fraction(ContentClass::k33) == 0.33);
  CHECK(content_fraction(ContentClass::k50) == 0.50);
  CHECK(content_fraction(ContentClass::k66) == 0.66);
  CHECK(content_fraction(ContentClass::kFull) == 1.0);
  CHECK_THROWS_AS(content_fraction(ContentClass::kOpaque),
                  std::invalid_argument);

  CHECK(content_initial(ContentClass::kOpaque).is_opaque);
  CHECK(content_initial(ContentClass::k66).fill_fraction ==
        doctest::Approx(0.66));
  for (ContentClass c : kAllContentClasses) {
    CHECK(parse_content(content_label(c)) == c);
  }
}

TEST_CASE("volume bins use inclusive upper edges") {
  CHECK(volume_bin(40).index == 0);
  CHECK(volume_bin(50).index == 0);
  CHECK(volume_bin(50.0001).index == 1);
  CHECK(volume_bin(100).index == 1);
  CHECK(volume_bin(750).index == 5);
  CHECK(volume_bin(3000).index == 8);
  CHECK(volume_bin(3000.5).index == 9);
  CHECK(volume_bin(5000).index == 9);
  CHECK_THROWS_AS(volume_bin(0), NonPositiveVolumeError);
  CHECK_THROWS_AS(volume_bin(-3), NonPositiveVolumeError);

  const double expected_midpoints[] = {25,  75,  150,  250,  400,
                                       625, 875, 1500, 2500, 4000};
  for (int i = 0; i < VolumeBin::kNumBins; ++i) {
    CHECK(VolumeBin{i}.midpoint_ml() == doctest::Approx(expected_midpoints[i]));
  }
}

TEST_CASE("comparative labels follow the strict pour inequality") {
  // 0.5 * 200 = 100 < (1 - 0.5) * 500 = 250
  CHECK(comparative_label(ann(200, ContentClass::k50),
                          ann(500, ContentClass::k50)) ==
        ComparativeLabel::kYes);
  CHECK(comparative_label(ann(200, ContentClass::kOpaque),
                          ann(500, ContentClass::k50)) ==
        ComparativeLabel::kCantTell);
  CHECK(comparative_label(ann(200, ContentClass::k50),
                          ann(500, ContentClass::kOpaque)) ==
        ComparativeLabel::kCantTell);
  // exact equality: 0.5 * 100 == (1 - 0.5) * 100 -> no
  CHECK(comparative_label(ann(100, ContentClass::k50),
                          ann(100, ContentClass::k50)) ==
        ComparativeLabel::kNo);
  // empty pours into anything with space
  CHECK(comparative_label(ann(100, ContentClass::kEmpty),
                          ann(100, ContentClass::k50)) ==
        ComparativeLabel::kYes);

  CHECK_THROWS_AS(comparative_label(ann(100, ContentClass::k50, "a"),
                                    ann(100, ContentClass::k50, "b")),
                  CrossImagePairError);

  CHECK(parse_comparative("cant_tell") == ComparativeLabel::kCantTell);
  CHECK(comparative_label_name(ComparativeLabel::kYes) == "yes");
  CHECK_FALSE(parse_comparative("maybe").has_value());
}

TEST_CASE("load_dataset accepts well-formed records") {
  std::istringstream in(std::string(kGoodLine) + "\n");
  const auto result = load_dataset(in);
  REQUIRE(result.records.size() == 1);
  CHECK_FALSE(result.has_errors());
  const auto& rec = result.records[0];
  CHECK(rec.image_id == "img-1");
  CHECK(rec.width == 640);
  REQUIRE(rec.containers.size() == 2);
  CHECK(rec.containers[0].image_id == "img-1");
  CHECK(rec.containers[0].content == ContentClass::k50);
  CHECK(rec.containers[1].upright == false);
  // fewer than 4 annotated objects only warns
  REQUIRE(result.diagnostics.size() == 1);
  CHECK(result.diagnostics[0].kind == DiagnosticKind::kWarning);
  CHECK(result.diagnostics[0].rule == "min-four-objects");
}

TEST_CASE("load_dataset rejects hard violations with line and rule") {
  const std::string small =
      R"({"image_id":"s","width":640,"height":480,"containers":[)"
      R"({"bbox":[0,0,29,20],"volume_ml":100,"content":"0","cad_id":"c","upright":true},)"
      R"({"bbox":[40,0,50,50],"volume_ml":100,"content":"0","cad_id":"c","upright":true}]})";
  std::istringstream in(std::string(kGoodLine) + "\n" + small + "\n");
  const auto result = load_dataset(in);
  CHECK(result.records.size() == 1);  // only the good line survives
  CHECK(result.has_errors());
  bool found = false;
  for (const auto& d : result.diagnostics) {
    if (d.rule == "bbox-max-side-30px") {
      found = true;
      CHECK(d.line == 2);
      CHECK(d.kind == DiagnosticKind::kInvariantViolation);
      CHECK(d.image_id == "s");
    }
  }
  CHECK(found);
}

TEST_CASE("load_dataset diagnoses every violation class") {
  auto diag_for = [](const std::string& line) {
    std::istringstream in(line + "\n");
    const auto result = load_dataset(in);
    REQUIRE(!result.diagnostics.empty());
    return result.diagnostics[0];
  };

  CHECK(diag_for("{not json").kind == DiagnosticKind::kParseError);
  CHECK(diag_for("[1,2]").kind == DiagnosticKind::kSchemaError);
  CHECK(diag_for(R"({"image_id":"x","width":640,"height":480})").rule ==
        "record-schema");
  CHECK(diag_for(
            R"({"image_id":"x","width":1.5,"height":480,"containers":[]})")
            .rule == "record-schema");

  // one container only
  const auto one = diag_for(
      R"({"image_id":"x","width":640,"height":480,"containers":[)"
      R"({"bbox":[0,0,50,50],"volume_ml":1,"content":"0","cad_id":"c","upright":true}]})");
  CHECK(one.rule == "min-two-containers");
  CHECK(one.kind == DiagnosticKind::kInvariantViolation);

  auto two_boxes = [](const char* first_bbox, const char* rest = "") {
    return std::string(R"({"image_id":"x","width":640,"height":480,)"
                       R"("containers":[{"bbox":)") +
           first_bbox +
           R"(,"volume_ml":1,"content":"0","cad_id":"c","upright":true)" +
           rest +
           R"(},{"bbox":[0,0,50,50],"volume_ml":1,"content":"0","cad_id":"c","upright":true}]})";
  };
  CHECK(diag_for(two_boxes("[0,0,-5,50]")).rule == "bbox-positive-size");
  CHECK(diag_for(two_boxes("[600,0,50,50]")).rule == "bbox-in-bounds");
  CHECK(diag_for(two_boxes("[0,450,50,50]")).rule == "bbox-in-bounds");

  // bad volume and bad content
  const std::string bad_volume =
      R"({"image_id":"x","width":640,"height":480,"containers":[)"
      R"({"bbox":[0,0,50,50],"volume_ml":0,"content":"0","cad_id":"c","upright":true},)"
      R"({"bbox":[0,0,50,50],"volume_ml":1,"content":"0","cad_id":"c","upright":true}]})";
  CHECK(diag_for(bad_volume).rule == "volume-positive");

  const std::string bad_content =
      R"({"image_id":"x","width":640,"height":480,"containers":[)"
      R"({"bbox":[0,0,50,50],"volume_ml":1,"content":"70","cad_id":"c","upright":true},)"
      R"({"bbox":[0,0,50,50],"volume_ml":1,"content":"0","cad_id":"c","upright":true}]})";
  CHECK(diag_for(bad_content).kind == DiagnosticKind::kSchemaError);
}

TEST_CASE("dataset serialization round-trips byte-stable") {
  std::istringstream in(std::string(kGoodLine) + "\n");
  const auto first = load_dataset(in);
  const std::string once = serialize_records(first.records);

  std::istringstream again(once);
  const auto second = load_dataset(again);
  CHECK_FALSE(second.has_errors());
  CHECK(serialize_records(second.records) == once);

  const auto dir = fresh_dir("roundtrip");
  save_dataset((dir / "data.jsonl").string(), first.records);
  const auto reloaded = load_dataset((dir / "data.jsonl").string());
  CHECK(serialize_records(reloaded.records) == once);
}

TEST_CASE("load_dataset raises IoError for missing files") {
  CHECK_THROWS_AS(load_dataset("/nonexistent/nowhere.jsonl"), IoError);
}

TEST_CASE("obj files round-trip exactly") {
  const auto dir = fresh_dir("obj");
  const auto path = (dir / "cup.obj").string();
  const auto cup = fixtures::cylinder_cup(0.37, 1.61803398874989, 20);
  save_obj(path, cup.mesh);
  const auto loaded = load_obj(path);
  REQUIRE(loaded.vertices.size() == cup.mesh.vertices.size());
  REQUIRE(loaded.faces == cup.mesh.faces);
  for (size_t i = 0; i < loaded.vertices.size(); ++i) {
    // 17 significant digits round-trip doubles exactly
    CHECK((loaded.vertices[i] - cup.mesh.vertices[i]).norm() == 0.0);
  }
}

TEST_CASE("load_obj parses common face reference styles") {
  const auto dir = fresh_dir("objrefs");
  const auto path = (dir / "tri.obj").string();
  write_file(path,
             "# comment\n"
             "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
             "vn 0 0 1\nvt 0 0\n"
             "f 1/1/1 2/2/1 3/3/1\n"
             "f 1//1 3//1 4//1\n"
             "f -4 -1 -2\n"
             "f 2 3 4\n");
  const auto mesh = load_obj(path);
  CHECK(mesh.vertices.size() == 4);
  REQUIRE(mesh.faces.size() == 4);
  CHECK(mesh.faces[0] == std::array<int, 3>{0, 1, 2});
  CHECK(mesh.faces[2] == std::array<int, 3>{0, 3, 2});

  write_file(path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 2 3 4\n");
  CHECK_THROWS_AS(load_obj(path), IoError);
  write_file(path, "v 0 0\n");
  CHECK_THROWS_AS(load_obj(path), IoError);
  CHECK_THROWS_AS(load_obj((dir / "missing.obj").string()), IoError);
}

TEST_CASE("load_container_model reads mesh plus sidecar") {
  const auto dir = fresh_dir("model");
  const auto cup = fixtures::cylinder_cup(1.0, 2.0, 64);
  save_obj((dir / "cup.obj").string(), cup.mesh);

  std::string caps = "[";
  for (size_t i = 0; i < cup.cap_faces.size(); ++i) {
    caps += (i ? "," : "") + std::to_string(cup.cap_faces[i]);
  }
  caps += "]";
  write_file(dir / "cup.json", "{\"cap_faces\":" + caps + "}");

  std::vector<std::string> warnings;
  const auto model = load_container_model((dir / "cup.obj").string(),
                                          (dir / "cup.json").string(),
                                          &warnings);
  CHECK(model.rim.size() == 64);
  CHECK(warnings.empty());
  CHECK(model.nominal_volume ==
        doctest::Approx(fixtures::cylinder_cup_volume(1.0, 2.0, 64))
            .epsilon(1e-9));
  CHECK_FALSE(model.tilt_axis.has_value());

  // 512 segments approximate the smooth cylinder to 0.1%
  const auto fine = fixtures::cylinder_cup(1.0, 2.0, 512);
  save_obj((dir / "fine.obj").string(), fine.mesh);
  std::string fine_caps = "[";
  for (size_t i = 0; i < fine.cap_faces.size(); ++i) {
    fine_caps += (i ? "," : "") + std::to_string(fine.cap_faces[i]);
  }
  fine_caps += "]";
  write_file(dir / "fine.json",
             "{\"cap_faces\":" + fine_caps + ",\"tilt_axis\":[0,1,0]}");
  const auto fine_model = load_container_model((dir / "fine.obj").string(),
                                               (dir / "fine.json").string());
  CHECK(std::abs(fine_model.nominal_volume - M_PI * 2.0) / (M_PI * 2.0) <
        1e-3);
  REQUIRE(fine_model.tilt_axis.has_value());
  CHECK(fine_model.tilt_axis->y() == 1.0);
}

TEST_CASE("load_container_model drops zero-area faces with a warning") {
  const auto dir = fresh_dir("degen");
  auto cup = fixtures::box_cup(1, 1, 1);
  cup.mesh.faces.push_back({0, 0, 1});  // structurally degenerate
  save_obj((dir / "cup.obj").string(), cup.mesh);
  write_file(dir / "cup.json", R"({"cap_faces":[2,3]})");

  std::vector<std::string> warnings;
  const auto model = load_container_model((dir / "cup.obj").string(),
                                          (dir / "cup.json").string(),
                                          &warnings);
  CHECK(model.interior.faces.size() == 12);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("zero-area") != std::string::npos);
}

TEST_CASE("load_container_model propagates geometry failures") {
  const auto dir = fresh_dir("broken");
  save_obj((dir / "holed.obj").string(), fixtures::cube_missing_face());
  write_file(dir / "holed.json", R"({"cap_faces":[2,3]})");
  CHECK_THROWS_AS(load_container_model((dir / "holed.obj").string(),
                                       (dir / "holed.json").string()),
                  poursim::geometry::NonWatertightError);

  save_obj((dir / "cup.obj").string(), fixtures::box_cup(1, 1, 1).mesh);
  write_file(dir / "bad.json", R"({"tilt_axis":[0,1,0]})");
  CHECK_THROWS_AS(load_container_model((dir / "cup.obj").string(),
                                       (dir / "bad.json").string()),
                  IoError);
  CHECK_THROWS_AS(load_container_model((dir / "cup.obj").string(),
                                       (dir / "missing.json").string()),
                  IoError);
}

TEST_CASE("groundtruth generation covers upright containers at all angles") {
  auto cup = fixtures::box_cup(1.0, 1.0, 1.2);
  ModelLibrary models;
  models.emplace("cup", pour::make_container_model(cup.mesh, cup.cap_faces));

  ImageRecord rec;
  rec.image_id = "img-1";
  rec.width = 640;
  rec.height = 480;
  rec.containers = {ann(250, ContentClass::kFull, "img-1"),
                    ann(100, ContentClass::kEmpty, "img-1"),
                    ann(100, ContentClass::kOpaque, "img-1"),
                    ann(100, ContentClass::k50, "img-1")};
  rec.containers[3].upright = false;

  const std::vector<double> angles = {36, 72, 108, 144, 180};
  const auto gt = generate_pour_groundtruth({rec}, models, angles);
  CHECK(gt.rows.size() == 3 * angles.size());
  REQUIRE(gt.skips.size() == 1);
  CHECK(gt.skips[0].container_index == 3);

  // full box cup at 180 degrees reproduces the hand-computed sequence
  const auto& last_full = gt.rows[angles.size() - 1];
  CHECK(last_full.container_index == 0);
  CHECK(last_full.angle_deg == 180);
  CHECK(last_full.sequence.to_string() == "[0.7, 0.2, 0.0]");

  // empty and opaque containers yield length-1 sequences at every angle
  for (size_t i = 0; i < angles.size(); ++i) {
    CHECK(gt.rows[angles.size() + i].sequence.to_string() == "[0.0]");
    CHECK(gt.rows[2 * angles.size() + i].sequence.to_string() == "[opaque]");
  }

  // rows arrive in (record, container, angle) order
  for (size_t i = 0; i + 1 < gt.rows.size(); ++i) {
    const auto& a = gt.rows[i];
    const auto& b = gt.rows[i + 1];
    CHECK(a.container_index <= b.container_index);
  }
}

TEST_CASE("groundtruth generation is parallel-deterministic") {
  auto cup = fixtures::cylinder_cup(1.0, 2.0, 24);
  ModelLibrary models;
  models.emplace("cup", pour::make_container_model(cup.mesh, cup.cap_faces));

  std::vector<ImageRecord> records;
  for (int i = 0; i < 6; ++i) {
    ImageRecord rec;
    rec.image_id = "img-" + std::to_string(i);
    rec.width = 640;
    rec.height = 480;
    rec.containers = {ann(100 + 50 * i, ContentClass::kFull, rec.image_id.c_str()),
                      ann(200 + 30 * i, ContentClass::k66, rec.image_id.c_str())};
    records.push_back(std::move(rec));
  }

  const std::vector<double> angles = {36, 72, 108, 144, 180};
  const auto serial = generate_pour_groundtruth(records, models, angles, 5, 1);
  const auto parallel =
      generate_pour_groundtruth(records, models, angles, 5, 8);
  CHECK(serialize_pour_groundtruth(serial.rows) ==
        serialize_pour_groundtruth(parallel.rows));
  CHECK(serial.rows.size() == records.size() * 2 * angles.size());
}

TEST_CASE("groundtruth generation validates inputs") {
  auto cup = fixtures::box_cup(1, 1, 1);
  ModelLibrary models;
  models.emplace("cup", pour::make_container_model(cup.mesh, cup.cap_faces));

  ImageRecord rec;
  rec.image_id = "img";
  rec.width = 100;
  rec.height = 100;
  rec.containers = {ann(100, ContentClass::kFull), ann(50, ContentClass::k50)};
  rec.containers[1].cad_id = "mystery";

  CHECK_THROWS_AS(generate_pour_groundtruth({rec}, models, {36, 180}),
                  UnresolvedCadIdError);
  rec.containers[1].cad_id = "cup";
  CHECK_THROWS_AS(generate_pour_groundtruth({rec}, models, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_pour_groundtruth({rec}, models, {0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_pour_groundtruth({rec}, models, {200.0}),
                  std::invalid_argument);
}

TEST_CASE("groundtruth rows serialize to stable JSONL") {
  PourGroundtruthRow row{"img-9", 2, 72.0,
                         pour::PourSequence({pour::FractionClass::tenths(7),
                                             pour::FractionClass::tenths(2),
                                             pour::FractionClass::tenths(0)})};
  CHECK(serialize_pour_groundtruth({row}) ==
        "{\"image_id\":\"img-9\",\"container_index\":2,\"angle_deg\":72.0,"
        "\"sequence\":[\"0.7\",\"0.2\",\"0.0\"]}\n");
}
