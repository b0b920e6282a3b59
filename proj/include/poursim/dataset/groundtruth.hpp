#pragma once

#include <map>
#include <string>
#include <vector>

#include "poursim/dataset/schema.hpp"
#include "poursim/pouring/simulate.hpp"

namespace poursim::dataset {

struct UnresolvedCadIdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ModelLibrary = std::map<std::string, pouring::ContainerModel>;

struct PourGroundtruthRow {
  std::string image_id;
  int container_index = 0;
  double angle_deg = 0.0;
  pouring::PourSequence sequence;
};

struct SkipNote {
  std::string image_id;
  int container_index = 0;
  std::string reason;
};

struct PourGroundtruth {
  std::vector<PourGroundtruthRow> rows;
  std::vector<SkipNote> skips;
};

/// Runs the pouring procedure for every upright container: rescale the CAD
/// model to the annotated volume, set the initial content, simulate each
/// angle. Non-upright containers are skipped with a note. Rows are emitted
/// in input order (record, container index, angle) regardless of `jobs`.
PourGroundtruth generate_pour_groundtruth(
    const std::vector<ImageRecord>& records, const ModelLibrary& models,
    const std::vector<double>& angle_list, int timesteps = 5, int jobs = 1);

/// JSONL rows: {"image_id", "container_index", "angle_deg", "sequence"}.
std::string serialize_pour_groundtruth(
    const std::vector<PourGroundtruthRow>& rows);

}  // namespace poursim::dataset
