#include "motionsplice/bezier.h"

#include <string>

#include "motionsplice/error.h"

namespace motionsplice {

Vec3 bezier_eval(const BezierArc& arc, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("bezier parameter " + std::to_string(t) + " outside [0, 1]");
  }
  const double u = 1.0 - t;
  return (u * u) * arc.p0 + (2.0 * u * t) * arc.p1 + (t * t) * arc.p2;
}

}  // namespace motionsplice
