#include "motionsplice/metrics.h"

#include <cmath>
#include <string>
#include <vector>

#include "motionsplice/error.h"

namespace motionsplice {
namespace {

void require_same_shape(const MotionSequence& a, const MotionSequence& b) {
  if (a.frame_count() != b.frame_count() || a.joint_count() != b.joint_count()) {
    throw ShapeMismatch("motions differ in shape: " + std::to_string(a.frame_count()) + "x" +
                        std::to_string(a.joint_count()) + " vs " +
                        std::to_string(b.frame_count()) + "x" +
                        std::to_string(b.joint_count()));
  }
}

Vec3 local(const MotionSequence& seq, std::size_t f, std::size_t j) {
  return seq.position(f, j) - seq.root(f);
}

// Population mean and variance over time of every joint coordinate, global
// and root-relative.
struct Moments {
  std::vector<Vec3> global_var;
  std::vector<Vec3> local_var;
};

Moments temporal_variance(const MotionSequence& seq) {
  const std::size_t frames = seq.frame_count();
  const std::size_t joints = seq.joint_count();
  std::vector<Vec3> gmean(joints, Vec3::Zero());
  std::vector<Vec3> lmean(joints, Vec3::Zero());
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t j = 0; j < joints; ++j) {
      gmean[j] += seq.position(f, j);
      lmean[j] += local(seq, f, j);
    }
  }
  const double inv = 1.0 / static_cast<double>(frames);
  for (std::size_t j = 0; j < joints; ++j) {
    gmean[j] *= inv;
    lmean[j] *= inv;
  }
  Moments m{std::vector<Vec3>(joints, Vec3::Zero()), std::vector<Vec3>(joints, Vec3::Zero())};
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t j = 0; j < joints; ++j) {
      m.global_var[j] += (seq.position(f, j) - gmean[j]).cwiseAbs2();
      m.local_var[j] += (local(seq, f, j) - lmean[j]).cwiseAbs2();
    }
  }
  for (std::size_t j = 0; j < joints; ++j) {
    m.global_var[j] *= inv;
    m.local_var[j] *= inv;
  }
  return m;
}

}  // namespace

double transition_distance(const MotionSequence& seq, std::size_t junction) {
  if (junction + 1 >= seq.frame_count()) {
    throw OutOfRange("transition at frame " + std::to_string(junction) + " needs frame " +
                     std::to_string(junction + 1) + " in a sequence of " +
                     std::to_string(seq.frame_count()));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < seq.joint_count(); ++j) {
    sum += (local(seq, junction + 1, j) - local(seq, junction, j)).squaredNorm();
  }
  return std::sqrt(sum);
}

double max_transition_distance(const MotionSequence& seq, std::size_t first, std::size_t last) {
  double worst = 0.0;
  for (std::size_t f = first; f < last; ++f) {
    worst = std::max(worst, transition_distance(seq, f));
  }
  return worst;
}

ApeAveReport ape(const MotionSequence& gt, const MotionSequence& gen) {
  require_same_shape(gt, gen);
  const std::size_t frames = gt.frame_count();
  const std::size_t joints = gt.joint_count();
  ApeAveReport r;
  for (std::size_t f = 0; f < frames; ++f) {
    const Vec3 root_diff = gt.root(f) - gen.root(f);
    r.root_joint += root_diff.norm();
    r.global_traj += std::hypot(root_diff.x(), root_diff.z());
    for (std::size_t j = 0; j < joints; ++j) {
      r.mean_global += (gt.position(f, j) - gen.position(f, j)).norm();
      r.mean_local += (local(gt, f, j) - local(gen, f, j)).norm();
    }
  }
  const double per_frame = 1.0 / static_cast<double>(frames);
  const double per_sample = per_frame / static_cast<double>(joints);
  r.root_joint *= per_frame;
  r.global_traj *= per_frame;
  r.mean_global *= per_sample;
  r.mean_local *= per_sample;
  return r;
}

ApeAveReport ave(const MotionSequence& gt, const MotionSequence& gen) {
  require_same_shape(gt, gen);
  const Moments a = temporal_variance(gt);
  const Moments b = temporal_variance(gen);
  const std::size_t joints = gt.joint_count();
  const std::size_t root = gt.skeleton().special().root;

  ApeAveReport r;
  const Vec3 root_diff = a.global_var[root] - b.global_var[root];
  r.root_joint = root_diff.norm();
  r.global_traj = std::hypot(root_diff.x(), root_diff.z());
  for (std::size_t j = 0; j < joints; ++j) {
    r.mean_global += (a.global_var[j] - b.global_var[j]).norm();
    r.mean_local += (a.local_var[j] - b.local_var[j]).norm();
  }
  r.mean_global /= static_cast<double>(joints);
  r.mean_local /= static_cast<double>(joints);
  return r;
}

}  // namespace motionsplice
