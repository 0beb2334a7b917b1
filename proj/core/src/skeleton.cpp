#include "motionsplice/skeleton.h"

#include <algorithm>
#include <array>

#include "motionsplice/error.h"

namespace motionsplice {

Skeleton::Skeleton(std::vector<std::string> joint_names, std::vector<int> parents,
                   SpecialJoints special)
    : names_(std::move(joint_names)), parents_(std::move(parents)), special_(special) {
  const std::size_t n = names_.size();
  if (n == 0) {
    throw InvariantViolation("skeleton must have at least one joint");
  }
  if (parents_.size() != n) {
    throw InvariantViolation("skeleton has " + std::to_string(n) + " names but " +
                             std::to_string(parents_.size()) + " parent entries");
  }

  std::size_t roots = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const int p = parents_[j];
    if (p == kNoParent) {
      ++roots;
      if (j != special_.root) {
        throw InvariantViolation("joint " + std::to_string(j) +
                                 " has no parent but is not the root");
      }
    } else if (p < 0 || static_cast<std::size_t>(p) >= n) {
      throw InvariantViolation("joint " + std::to_string(j) + " has parent index " +
                               std::to_string(p) + " outside [0, " + std::to_string(n) + ")");
    }
  }
  if (roots != 1) {
    throw InvariantViolation("skeleton must have exactly one root, found " +
                             std::to_string(roots));
  }

  // Every chain must reach the root within n steps.
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t steps = 0;
    int cur = static_cast<int>(j);
    while (cur != kNoParent) {
      if (++steps > n) {
        throw InvariantViolation("cycle in parent chain of joint " + std::to_string(j));
      }
      cur = parents_[static_cast<std::size_t>(cur)];
    }
  }

  const std::array<std::size_t, 5> ids = {special_.root, special_.neck, special_.head,
                                          special_.left_foot, special_.right_foot};
  for (std::size_t a = 0; a < ids.size(); ++a) {
    if (ids[a] >= n) {
      throw InvariantViolation("special joint index " + std::to_string(ids[a]) +
                               " out of range");
    }
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      if (ids[a] == ids[b]) {
        throw InvariantViolation("special joint indices must be distinct");
      }
    }
  }
}

std::shared_ptr<const Skeleton> Skeleton::humanml3d() {
  static const std::shared_ptr<const Skeleton> skeleton = std::make_shared<const Skeleton>(
      std::vector<std::string>{"pelvis",       "left_hip",       "right_hip",      "spine1",
                               "left_knee",    "right_knee",     "spine2",         "left_ankle",
                               "right_ankle",  "spine3",         "left_foot",      "right_foot",
                               "neck",         "left_collar",    "right_collar",   "head",
                               "left_shoulder", "right_shoulder", "left_elbow",    "right_elbow",
                               "left_wrist",   "right_wrist"},
      std::vector<int>{-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19},
      SpecialJoints{.root = 0, .neck = 12, .head = 15, .left_foot = 10, .right_foot = 11});
  return skeleton;
}

std::optional<std::size_t> Skeleton::find(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - names_.begin());
}

std::optional<std::size_t> Skeleton::ankle_of(std::size_t foot) const {
  const int p = parents_.at(foot);
  if (p == kNoParent || static_cast<std::size_t>(p) == special_.root) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(p);
}

}  // namespace motionsplice
