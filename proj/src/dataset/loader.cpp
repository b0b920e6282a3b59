#include "poursim/dataset/loader.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "poursim/geometry/mesh.hpp"

namespace poursim::dataset {

using nlohmann::json;
using nlohmann::ordered_json;

std::string diagnostic_kind_name(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::kParseError: return "parse-error";
    case DiagnosticKind::kSchemaError: return "schema-error";
    case DiagnosticKind::kInvariantViolation: return "invariant-violation";
    case DiagnosticKind::kWarning: return "warning";
  }
  throw std::logic_error("unreachable");
}

bool LoadResult::has_errors() const {
  for (const auto& d : diagnostics) {
    if (d.is_error()) return true;
  }
  return false;
}

namespace {

struct RecordParser {
  int line;
  std::vector<Diagnostic>* out;
  std::string image_id;
  bool rejected = false;

  void fail(DiagnosticKind kind, std::string rule, std::string message) {
    out->push_back(
        {kind, line, image_id, std::move(rule), std::move(message)});
    rejected = true;
  }

  void warn(std::string rule, std::string message) {
    out->push_back({DiagnosticKind::kWarning, line, image_id, std::move(rule),
                    std::move(message)});
  }
};

bool get_string(RecordParser& p, const json& obj, const char* key,
                std::string* dst) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           std::string("missing or non-string field \"") + key + "\"");
    return false;
  }
  *dst = obj[key].get<std::string>();
  return true;
}

bool get_number(RecordParser& p, const json& obj, const char* key,
                double* dst) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           std::string("missing or non-numeric field \"") + key + "\"");
    return false;
  }
  *dst = obj[key].get<double>();
  return true;
}

bool parse_container(RecordParser& p, const json& node, size_t index,
                     const ImageRecord& record, ContainerAnnotation* dst) {
  if (!node.is_object()) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           "containers entries must be objects");
    return false;
  }
  dst->image_id = record.image_id;

  if (!node.contains("bbox") || !node["bbox"].is_array() ||
      node["bbox"].size() != 4) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           "container bbox must be an array [x, y, w, h]");
    return false;
  }
  double box[4];
  for (int i = 0; i < 4; ++i) {
    if (!node["bbox"][i].is_number()) {
      p.fail(DiagnosticKind::kSchemaError, "record-schema",
             "container bbox entries must be numbers");
      return false;
    }
    box[i] = node["bbox"][i].get<double>();
  }
  dst->bbox = {box[0], box[1], box[2], box[3]};

  if (!get_number(p, node, "volume_ml", &dst->volume_ml)) return false;

  std::string content;
  if (!get_string(p, node, "content", &content)) return false;
  auto parsed = parse_content(content);
  if (!parsed) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           "unknown content class \"" + content + "\"");
    return false;
  }
  dst->content = *parsed;

  if (!get_string(p, node, "cad_id", &dst->cad_id)) return false;

  if (!node.contains("upright") || !node["upright"].is_boolean()) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           "missing or non-boolean field \"upright\"");
    return false;
  }
  dst->upright = node["upright"].get<bool>();

  char where[64];
  std::snprintf(where, sizeof(where), "container %zu", index);

  const BoundingBox& b = dst->bbox;
  if (!(b.w > 0.0) || !(b.h > 0.0)) {
    p.fail(DiagnosticKind::kInvariantViolation, "bbox-positive-size",
           std::string(where) + ": bbox sides must be positive");
    return false;
  }
  if (std::max(b.w, b.h) < 30.0) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "%s: bbox larger side %.6g px is below the 30 px minimum",
                  where, std::max(b.w, b.h));
    p.fail(DiagnosticKind::kInvariantViolation, "bbox-max-side-30px", msg);
    return false;
  }
  if (b.x < 0.0 || b.y < 0.0 || b.x + b.w > record.width ||
      b.y + b.h > record.height) {
    p.fail(DiagnosticKind::kInvariantViolation, "bbox-in-bounds",
           std::string(where) + ": bbox extends outside the image");
    return false;
  }
  if (!(dst->volume_ml > 0.0)) {
    p.fail(DiagnosticKind::kInvariantViolation, "volume-positive",
           std::string(where) + ": volume_ml must be positive");
    return false;
  }
  return true;
}

void parse_record(const std::string& text, int line, LoadResult* result) {
  RecordParser p{line, &result->diagnostics, "", false};

  json node = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (node.is_discarded()) {
    p.fail(DiagnosticKind::kParseError, "json-parse", "line is not valid JSON");
    return;
  }
  if (!node.is_object()) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           "record must be a JSON object");
    return;
  }

  ImageRecord record;
  if (!get_string(p, node, "image_id", &record.image_id)) return;
  p.image_id = record.image_id;

  for (const char* key : {"width", "height"}) {
    if (!node.contains(key) || !node[key].is_number_integer()) {
      p.fail(DiagnosticKind::kSchemaError, "record-schema",
             std::string("missing or non-integer field \"") + key + "\"");
      return;
    }
  }
  record.width = node["width"].get<int>();
  record.height = node["height"].get<int>();
  if (record.width <= 0 || record.height <= 0) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           "image dimensions must be positive");
    return;
  }

  if (!node.contains("containers") || !node["containers"].is_array()) {
    p.fail(DiagnosticKind::kSchemaError, "record-schema",
           "missing or non-array field \"containers\"");
    return;
  }
  for (size_t i = 0; i < node["containers"].size(); ++i) {
    ContainerAnnotation c;
    if (!parse_container(p, node["containers"][i], i, record, &c)) continue;
    record.containers.push_back(std::move(c));
  }
  if (p.rejected) return;

  if (record.containers.size() < 2) {
    p.fail(DiagnosticKind::kInvariantViolation, "min-two-containers",
           "image must annotate at least two containers, found " +
               std::to_string(record.containers.size()));
    return;
  }
  if (record.containers.size() < 4) {
    p.warn("min-four-objects",
           "fewer than 4 annotated objects; cannot confirm the scene rule");
  }
  result->records.push_back(std::move(record));
}

}  // namespace

LoadResult load_dataset(std::istream& in) {
  LoadResult result;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    parse_record(text, line, &result);
  }
  return result;
}

LoadResult load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open annotation file: " + path);
  return load_dataset(in);
}

std::string serialize_records(const std::vector<ImageRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    ordered_json node;
    node["image_id"] = record.image_id;
    node["width"] = record.width;
    node["height"] = record.height;
    node["containers"] = ordered_json::array();
    for (const auto& c : record.containers) {
      ordered_json cj;
      cj["bbox"] = {c.bbox.x, c.bbox.y, c.bbox.w, c.bbox.h};
      cj["volume_ml"] = c.volume_ml;
      cj["content"] = content_label(c.content);
      cj["cad_id"] = c.cad_id;
      cj["upright"] = c.upright;
      node["containers"].push_back(std::move(cj));
    }
    out += node.dump();
    out += '\n';
  }
  return out;
}

void save_dataset(const std::string& path,
                  const std::vector<ImageRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write annotation file: " + path);
  out << serialize_records(records);
  if (!out) throw IoError("failed writing annotation file: " + path);
}

pouring::TriangleMesh load_obj(const std::string& path,
                               std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open OBJ file: " + path);

  pouring::TriangleMesh mesh;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream row(text);
    std::string tag;
    if (!(row >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(row >> x >> y >> z)) {
        throw IoError(path + ":" + std::to_string(line) +
                      ": vertex needs three coordinates");
      }
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> corners;
      std::string ref;
      while (row >> ref) {
        // accept v, v/vt, v//vn, v/vt/vn; only the vertex index matters
        size_t slash = ref.find('/');
        int idx = 0;
        try {
          idx = std::stoi(ref.substr(0, slash));
        } catch (const std::exception&) {
          throw IoError(path + ":" + std::to_string(line) +
                        ": bad face vertex reference \"" + ref + "\"");
        }
        if (idx < 0) idx = static_cast<int>(mesh.vertices.size()) + idx + 1;
        corners.push_back(idx - 1);
      }
      if (corners.size() != 3) {
        throw IoError(path + ":" + std::to_string(line) +
                      ": only triangular faces are supported");
      }
      mesh.faces.push_back({corners[0], corners[1], corners[2]});
    } else if (warnings && tag != "vn" && tag != "vt" && tag != "s" &&
               tag != "o" && tag != "g" && tag != "usemtl" &&
               tag != "mtllib") {
      warnings->push_back(path + ":" + std::to_string(line) +
                          ": ignoring unsupported statement \"" + tag + "\"");
    }
  }
  return mesh;
}

void save_obj(const std::string& path, const pouring::TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write OBJ file: " + path);
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x(), v.y(),
                  v.z());
    out << buf;
  }
  for (const auto& f : mesh.faces) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
  if (!out) throw IoError("failed writing OBJ file: " + path);
}

namespace {

double face_area(const pouring::TriangleMesh& mesh,
                 const std::array<int, 3>& f) {
  const auto& a = mesh.vertices[f[0]];
  const auto& b = mesh.vertices[f[1]];
  const auto& c = mesh.vertices[f[2]];
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace

pouring::ContainerModel load_container_model(
    const std::string& mesh_path, const std::string& sidecar_path,
    std::vector<std::string>* warnings) {
  pouring::TriangleMesh mesh = load_obj(mesh_path, warnings);

  std::ifstream side(sidecar_path);
  if (!side) throw IoError("cannot open sidecar file: " + sidecar_path);
  json node = json::parse(side, nullptr, /*allow_exceptions=*/false);
  if (node.is_discarded() || !node.is_object()) {
    throw IoError("sidecar is not a JSON object: " + sidecar_path);
  }
  if (!node.contains("cap_faces") || !node["cap_faces"].is_array()) {
    throw IoError("sidecar must declare a \"cap_faces\" array: " +
                  sidecar_path);
  }
  std::vector<int> cap_faces;
  for (const auto& v : node["cap_faces"]) {
    if (!v.is_number_integer()) {
      throw IoError("sidecar cap_faces must be integers: " + sidecar_path);
    }
    cap_faces.push_back(v.get<int>());
  }
  std::optional<pouring::Vec3> tilt_axis;
  if (node.contains("tilt_axis")) {
    const auto& ax = node["tilt_axis"];
    if (!ax.is_array() || ax.size() != 3 || !ax[0].is_number() ||
        !ax[1].is_number() || !ax[2].is_number()) {
      throw IoError("sidecar tilt_axis must be [x, y, z]: " + sidecar_path);
    }
    tilt_axis = pouring::Vec3(ax[0].get<double>(), ax[1].get<double>(),
                              ax[2].get<double>());
  }

  const double area_floor =
      1e-12 * mesh.bbox_diagonal() * mesh.bbox_diagonal();
  std::vector<int> remap(mesh.faces.size(), -1);
  std::vector<std::array<int, 3>> kept;
  const int nv = static_cast<int>(mesh.vertices.size());
  for (size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    bool in_range = f[0] >= 0 && f[0] < nv && f[1] >= 0 && f[1] < nv &&
                    f[2] >= 0 && f[2] < nv;
    if (in_range && face_area(mesh, f) < area_floor) {
      if (warnings) {
        warnings->push_back(mesh_path + ": dropping zero-area face " +
                            std::to_string(i));
      }
      continue;
    }
    remap[i] = static_cast<int>(kept.size());
    kept.push_back(f);
  }
  mesh.faces = std::move(kept);

  std::vector<int> live_caps;
  for (int c : cap_faces) {
    if (c < 0 || c >= static_cast<int>(remap.size())) {
      throw pouring::InvalidCapError("cap face index out of range: " +
                                     std::to_string(c));
    }
    if (remap[c] < 0) {
      if (warnings) {
        warnings->push_back(mesh_path + ": cap face " + std::to_string(c) +
                            " was dropped as zero-area");
      }
      continue;
    }
    live_caps.push_back(remap[c]);
  }

  pouring::ContainerModel model = pouring::make_container_model(
      std::move(mesh), std::move(live_caps), tilt_axis);
  const double tilt = pouring::rim_tilt_deg(model);
  if (warnings && tilt > 1.0) {
    char msg[128];
    std::snprintf(msg, sizeof(msg), "rim is tilted %.3f deg from horizontal",
                  tilt);
    warnings->push_back(mesh_path + ": " + msg);
  }
  return model;
}

}  // namespace poursim::dataset
