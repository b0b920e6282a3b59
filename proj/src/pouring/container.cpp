#include "poursim/pouring/container.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "poursim/geometry/mesh.hpp"

namespace poursim::pouring {

namespace {

// Boundary edges of the cap face subset, chained into a vertex loop.
std::vector<int> derive_rim(const TriangleMesh& mesh,
                            const std::vector<int>& cap_faces) {
  std::set<int> cap(cap_faces.begin(), cap_faces.end());
  std::map<std::pair<int, int>, int> edge_cap_count;  // undirected -> #cap faces
  std::map<std::pair<int, int>, int> edge_count;
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const auto& f = mesh.faces[fi];
    for (int i = 0; i < 3; ++i) {
      auto key = std::minmax(f[i], f[(i + 1) % 3]);
      edge_count[key] += 1;
      if (cap.count(fi)) edge_cap_count[key] += 1;
    }
  }

  // Rim edges have exactly one cap face and one non-cap face. Keep them
  // directed as traversed by their cap face so the loop chains head-to-tail.
  std::map<int, int> next;
  for (int fi : cap_faces) {
    const auto& f = mesh.faces[fi];
    for (int i = 0; i < 3; ++i) {
      const int u = f[i];
      const int v = f[(i + 1) % 3];
      auto key = std::minmax(u, v);
      if (edge_count[key] == 2 && edge_cap_count[key] == 1) {
        if (!next.emplace(u, v).second) {
          throw InvalidCapError("cap boundary is not a simple loop");
        }
      }
    }
  }
  if (next.empty()) {
    throw InvalidCapError("cap faces have no boundary with the rest of the mesh");
  }

  std::vector<int> rim;
  const int start = next.begin()->first;
  int cur = start;
  do {
    rim.push_back(cur);
    auto it = next.find(cur);
    if (it == next.end()) {
      throw InvalidCapError("cap boundary loop does not close");
    }
    cur = it->second;
    next.erase(it);
  } while (cur != start);
  if (!next.empty()) {
    throw InvalidCapError("cap boundary forms more than one loop");
  }
  return rim;
}

}  // namespace

ContainerModel make_container_model(TriangleMesh interior,
                                    std::vector<int> cap_faces,
                                    std::optional<Vec3> tilt_axis) {
  geometry::require_watertight(interior);  // holes and bad winding
  auto report = geometry::validate_mesh(interior);
  if (!report.ok()) {
    throw geometry::MeshValidationError("container interior is invalid: " +
                                        report.summary());
  }
  if (cap_faces.empty()) {
    throw MissingCapError("container has no cap faces tagged");
  }
  std::sort(cap_faces.begin(), cap_faces.end());
  cap_faces.erase(std::unique(cap_faces.begin(), cap_faces.end()),
                  cap_faces.end());
  const int nf = static_cast<int>(interior.faces.size());
  if (cap_faces.front() < 0 || cap_faces.back() >= nf) {
    throw InvalidCapError("cap face index out of range");
  }

  ContainerModel model;
  model.rim = derive_rim(interior, cap_faces);
  model.nominal_volume = geometry::mesh_volume(interior);
  model.interior = std::move(interior);
  model.cap_faces = std::move(cap_faces);
  model.tilt_axis = tilt_axis;
  return model;
}

double rim_tilt_deg(const ContainerModel& model) {
  if (model.rim.size() < 3) return 0.0;
  // Newell normal of the rim loop.
  Vec3 n = Vec3::Zero();
  for (size_t i = 0; i < model.rim.size(); ++i) {
    const Vec3& a = model.interior.vertices[model.rim[i]];
    const Vec3& b = model.interior.vertices[model.rim[(i + 1) % model.rim.size()]];
    n.x() += (a.y() - b.y()) * (a.z() + b.z());
    n.y() += (a.z() - b.z()) * (a.x() + b.x());
    n.z() += (a.x() - b.x()) * (a.y() + b.y());
  }
  if (n.norm() == 0.0) return 0.0;
  const double c = std::abs(n.normalized().z());
  return std::acos(std::clamp(c, 0.0, 1.0)) * 180.0 / M_PI;
}

Vec3 default_tilt_axis(const ContainerModel& model) {
  Vec3 rim_centroid = Vec3::Zero();
  for (int v : model.rim) rim_centroid += model.interior.vertices[v];
  rim_centroid /= static_cast<double>(model.rim.size());

  Vec3 d = rim_centroid - model.interior.vertex_centroid();
  d.z() = 0.0;
  if (d.norm() < 1e-9 * std::max(model.interior.bbox_diagonal(), 1e-300)) {
    return Vec3::UnitY();
  }
  // Positive rotation about z x d tips the rim-offset direction downward,
  // pouring over the side the opening leans toward.
  return Vec3::UnitZ().cross(d.normalized()).normalized();
}

FractionClass FractionClass::tenths(int i) {
  if (i < 0 || i > 10) {
    throw std::invalid_argument("fraction class index must be in [0, 10]");
  }
  return FractionClass(i);
}

FractionClass FractionClass::snap(double f) {
  const double clamped = std::clamp(f, 0.0, 1.0);
  return FractionClass(static_cast<int>(std::floor(clamped * 10.0 + 0.5)));
}

std::optional<FractionClass> FractionClass::parse(std::string_view label) {
  if (label == "opaque") return opaque();
  if (label == "1.0" || label == "1") return tenths(10);
  if (label.size() == 3 && label[0] == '0' && label[1] == '.' &&
      label[2] >= '0' && label[2] <= '9') {
    return tenths(label[2] - '0');
  }
  return std::nullopt;
}

std::string FractionClass::label() const {
  if (is_opaque()) return "opaque";
  if (index_ == 10) return "1.0";
  return std::string("0.") + static_cast<char>('0' + index_);
}

PourSequence::PourSequence(std::vector<FractionClass> elements)
    : elements_(std::move(elements)) {
  if (elements_.empty() || elements_.size() > kMaxLength) {
    throw InvalidPourSequenceError("sequence length must be in [1, 5]");
  }
  for (size_t i = 0; i < elements_.size(); ++i) {
    const auto& e = elements_[i];
    const bool last = i + 1 == elements_.size();
    if (e.is_opaque() && (elements_.size() != 1)) {
      throw InvalidPourSequenceError("opaque only appears alone");
    }
    if (!e.is_opaque() && e.index() == 0 && !last) {
      throw InvalidPourSequenceError("0.0 terminates the sequence");
    }
    if (i > 0 && elements_[i - 1].index() < e.index()) {
      throw InvalidPourSequenceError("fractions must be non-increasing");
    }
  }
}

std::string PourSequence::to_string() const {
  std::string out = "[";
  for (size_t i = 0; i < elements_.size(); ++i) {
    if (i) out += ", ";
    out += elements_[i].label();
  }
  out += "]";
  return out;
}

TiltQuery::TiltQuery(double angle_deg, int steps, const Vec3& tilt_axis)
    : target_angle_deg(angle_deg), timesteps(steps), axis(tilt_axis) {
  if (!(angle_deg > 0.0 && angle_deg <= 180.0)) {
    throw std::invalid_argument("target angle must be in (0, 180] degrees");
  }
  if (steps < 1 || steps > PourSequence::kMaxLength) {
    throw std::invalid_argument("timesteps must be in [1, 5]");
  }
  // Axis constraints checked by Rotation at use.
}

InitialContent InitialContent::fraction(double f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw std::invalid_argument("fill fraction must be in [0, 1]");
  }
  return {false, f};
}

}  // namespace poursim::pouring
