#pragma once

#include "motionsplice/motion.h"

namespace motionsplice {

// Quadratic Bezier arc: start p0, control p1, end p2.
struct BezierArc {
  Vec3 p0 = Vec3::Zero();
  Vec3 p1 = Vec3::Zero();
  Vec3 p2 = Vec3::Zero();
};

// (1-t)^2 p0 + 2(1-t)t p1 + t^2 p2. Throws DomainError unless 0 <= t <= 1.
Vec3 bezier_eval(const BezierArc& arc, double t);

}  // namespace motionsplice
