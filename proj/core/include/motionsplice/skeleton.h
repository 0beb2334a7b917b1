#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace motionsplice {

// Joint indices the algorithms need by role.
struct SpecialJoints {
  std::size_t root = 0;
  std::size_t neck = 0;
  std::size_t head = 0;
  std::size_t left_foot = 0;
  std::size_t right_foot = 0;

  bool operator==(const SpecialJoints&) const = default;
};

// Joint topology. Immutable after construction; the constructor throws
// InvariantViolation if the hierarchy is not a single rooted tree or if the
// special indices are out of range or not distinct.
class Skeleton {
 public:
  static constexpr int kNoParent = -1;

  Skeleton(std::vector<std::string> joint_names, std::vector<int> parents,
           SpecialJoints special);

  // The 22-joint HumanML3D layout (SMPL body joints without hands):
  // root pelvis=0, neck=12, head=15, left_foot=10, right_foot=11.
  static std::shared_ptr<const Skeleton> humanml3d();

  std::size_t joint_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& joint_names() const noexcept { return names_; }
  const std::vector<int>& parents() const noexcept { return parents_; }
  int parent(std::size_t joint) const { return parents_.at(joint); }
  const SpecialJoints& special() const noexcept { return special_; }

  std::optional<std::size_t> find(std::string_view name) const;

  // The joint directly above a foot (its parent) unless that parent is the
  // root. Used to carry the ankle along when a foot is repositioned.
  std::optional<std::size_t> ankle_of(std::size_t foot) const;

  bool operator==(const Skeleton&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<int> parents_;
  SpecialJoints special_;
};

}  // namespace motionsplice
