#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "poursim/dataset/schema.hpp"

namespace poursim::dataset {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DiagnosticKind { kParseError, kSchemaError, kInvariantViolation, kWarning };

struct Diagnostic {
  DiagnosticKind kind;
  int line = 0;            // 1-based line in the JSONL file; 0 if n/a
  std::string image_id;    // empty when unknown
  std::string rule;        // short rule name, e.g. "bbox-min-side-30px"
  std::string message;

  bool is_error() const { return kind != DiagnosticKind::kWarning; }
};

std::string diagnostic_kind_name(DiagnosticKind k);

struct LoadResult {
  std::vector<ImageRecord> records;  // records that passed all hard checks
  std::vector<Diagnostic> diagnostics;

  bool has_errors() const;
};

/// Reads a JSON-Lines annotation file. Hard violations reject the record
/// and are reported with line number and rule; warnings keep it. Throws
/// IoError only when the file cannot be read.
LoadResult load_dataset(const std::string& path);
LoadResult load_dataset(std::istream& in);

/// Deterministic JSONL serialization (schema field order, one record per
/// line). load -> serialize -> load is structurally stable.
std::string serialize_records(const std::vector<ImageRecord>& records);
void save_dataset(const std::string& path,
                  const std::vector<ImageRecord>& records);

/// Wavefront OBJ text, v/f statements, triangles only.
pouring::TriangleMesh load_obj(const std::string& path,
                               std::vector<std::string>* warnings = nullptr);
void save_obj(const std::string& path, const pouring::TriangleMesh& mesh);

/// Loads an OBJ mesh plus its sidecar JSON ({"cap_faces": [int],
/// "tilt_axis": [x,y,z] optional}) into a validated ContainerModel.
/// Zero-area faces are dropped with a warning before validation; a rim
/// that is not horizontal within 1 degree warns as well.
pouring::ContainerModel load_container_model(
    const std::string& mesh_path, const std::string& sidecar_path,
    std::vector<std::string>* warnings = nullptr);

}  // namespace poursim::dataset
