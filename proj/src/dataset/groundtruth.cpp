#include "poursim/dataset/groundtruth.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace poursim::dataset {

namespace {

struct Task {
  const ImageRecord* record;
  int container_index;
};

std::vector<PourGroundtruthRow> run_task(const Task& task,
                                         const ModelLibrary& models,
                                         const std::vector<double>& angle_list,
                                         int timesteps) {
  const ContainerAnnotation& ann =
      task.record->containers[task.container_index];
  const pouring::ContainerModel& base = models.at(ann.cad_id);
  pouring::ContainerModel scaled =
      pouring::rescale_to_volume(base, ann.volume_ml);
  const pouring::Vec3 axis =
      scaled.tilt_axis ? *scaled.tilt_axis : pouring::default_tilt_axis(scaled);
  const pouring::InitialContent initial = content_initial(ann.content);

  std::vector<PourGroundtruthRow> rows;
  rows.reserve(angle_list.size());
  for (double angle : angle_list) {
    pouring::TiltQuery query(angle, timesteps, axis);
    rows.push_back({task.record->image_id, task.container_index, angle,
                    pouring::simulate_pour(scaled, initial, query)});
  }
  return rows;
}

}  // namespace

PourGroundtruth generate_pour_groundtruth(
    const std::vector<ImageRecord>& records, const ModelLibrary& models,
    const std::vector<double>& angle_list, int timesteps, int jobs) {
  if (angle_list.empty()) {
    throw std::invalid_argument("angle list must not be empty");
  }
  for (double angle : angle_list) {
    if (!(angle > 0.0 && angle <= 180.0)) {
      throw std::invalid_argument("tilt angles must be in (0, 180] degrees");
    }
  }

  PourGroundtruth result;
  std::vector<Task> tasks;
  for (const auto& record : records) {
    for (size_t i = 0; i < record.containers.size(); ++i) {
      const auto& ann = record.containers[i];
      if (!ann.upright) {
        result.skips.push_back({record.image_id, static_cast<int>(i),
                                "container is not in the upright pose"});
        continue;
      }
      if (!models.count(ann.cad_id)) {
        throw UnresolvedCadIdError("no CAD model for cad_id \"" + ann.cad_id +
                                   "\" (image " + record.image_id + ")");
      }
      tasks.push_back({&record, static_cast<int>(i)});
    }
  }

  std::vector<std::vector<PourGroundtruthRow>> per_task(tasks.size());
  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (workers <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) {
      per_task[i] = run_task(tasks[i], models, angle_list, timesteps);
    }
  } else {
    std::atomic<size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
      for (size_t i = next.fetch_add(1); i < tasks.size();
           i = next.fetch_add(1)) {
        try {
          per_task[i] = run_task(tasks[i], models, angle_list, timesteps);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  for (auto& rows : per_task) {
    for (auto& row : rows) result.rows.push_back(std::move(row));
  }
  return result;
}

std::string serialize_pour_groundtruth(
    const std::vector<PourGroundtruthRow>& rows) {
  std::string out;
  for (const auto& row : rows) {
    nlohmann::ordered_json node;
    node["image_id"] = row.image_id;
    node["container_index"] = row.container_index;
    node["angle_deg"] = row.angle_deg;
    auto seq = nlohmann::ordered_json::array();
    for (const auto& c : row.sequence.elements()) seq.push_back(c.label());
    node["sequence"] = std::move(seq);
    out += node.dump();
    out += '\n';
  }
  return out;
}

}  // namespace poursim::dataset
