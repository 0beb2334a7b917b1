#include "motionsplice/synthetic.h"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "motionsplice/error.h"

namespace motionsplice {
namespace {

constexpr double kPi = std::numbers::pi;

// HumanML3D joint indices.
enum Joint : std::size_t {
  kPelvis = 0,
  kLeftHip = 1,
  kRightHip = 2,
  kSpine1 = 3,
  kLeftKnee = 4,
  kRightKnee = 5,
  kSpine2 = 6,
  kLeftAnkle = 7,
  kRightAnkle = 8,
  kSpine3 = 9,
  kLeftFoot = 10,
  kRightFoot = 11,
  kNeck = 12,
  kLeftCollar = 13,
  kRightCollar = 14,
  kHead = 15,
  kLeftShoulder = 16,
  kRightShoulder = 17,
  kLeftElbow = 18,
  kRightElbow = 19,
  kLeftWrist = 20,
  kRightWrist = 21,
  kJointCount = 22,
};

constexpr double kPelvisHeight = 0.95;

// Upper-body rest offsets from the pelvis (x left, y up, z forward).
constexpr std::array<std::pair<Joint, std::array<double, 3>>, 13> kUpperRest = {{
    {kSpine1, {0.0, 0.10, 0.0}},
    {kSpine2, {0.0, 0.23, 0.0}},
    {kSpine3, {0.0, 0.35, 0.0}},
    {kNeck, {0.0, 0.55, 0.0}},
    {kHead, {0.0, 0.67, 0.0}},
    {kLeftCollar, {0.07, 0.47, 0.0}},
    {kRightCollar, {-0.07, 0.47, 0.0}},
    {kLeftShoulder, {0.18, 0.47, 0.0}},
    {kRightShoulder, {-0.18, 0.47, 0.0}},
    {kLeftElbow, {0.20, 0.20, 0.0}},
    {kRightElbow, {-0.20, 0.20, 0.0}},
    {kLeftWrist, {0.21, -0.05, 0.02}},
    {kRightWrist, {-0.21, -0.05, 0.02}},
}};

constexpr double kHipHalfWidth = 0.09;
constexpr double kHipDrop = 0.07;
const Vec3 kAnkleAboveFoot(0.0, 0.07, -0.12);

struct GaitParams {
  double speed;         // m/s
  double period;        // s per full cycle
  double stance;        // fraction of the cycle a foot is planted
  double lift;          // swing apex height, m
  double bob;           // pelvis vertical amplitude, m
  double arm_swing;     // wrist fore-aft amplitude, m
  double phase;         // cycles
};

struct Pose {
  std::array<Vec3, kJointCount> p;
};

// Planted-gait foot position along z plus height, for one foot at phase `u`
// (cycles, unbounded).
Vec3 gait_foot(const GaitParams& g, double u, double side_x, double ground_y) {
  const double k = std::floor(u);
  const double tau = u - k;
  const double swing = 1.0 - g.stance;
  const double step = g.speed * g.period;
  double progress = 0.0;
  double height = 0.0;
  if (tau >= g.stance) {
    const double s = (tau - g.stance) / swing;
    progress = 0.5 * (1.0 - std::cos(kPi * s));
    height = g.lift * std::sin(kPi * s);
  }
  // Centers the foot under the pelvis on average over a cycle.
  const double center = step * (0.5 - swing / 2.0);
  const double z = step * (k + progress - g.phase) + center;
  return {side_x, ground_y + height, z};
}

void place_legs(Pose& pose, const Vec3& pelvis, const Vec3& left_foot, const Vec3& right_foot) {
  pose.p[kLeftHip] = pelvis + Vec3(kHipHalfWidth, -kHipDrop, 0.0);
  pose.p[kRightHip] = pelvis + Vec3(-kHipHalfWidth, -kHipDrop, 0.0);
  pose.p[kLeftFoot] = left_foot;
  pose.p[kRightFoot] = right_foot;
  pose.p[kLeftAnkle] = left_foot + kAnkleAboveFoot;
  pose.p[kRightAnkle] = right_foot + kAnkleAboveFoot;
  pose.p[kLeftKnee] = 0.5 * (pose.p[kLeftHip] + pose.p[kLeftAnkle]) + Vec3(0.0, 0.0, 0.06);
  pose.p[kRightKnee] = 0.5 * (pose.p[kRightHip] + pose.p[kRightAnkle]) + Vec3(0.0, 0.0, 0.06);
}

// Upper-body offsets, optionally edited per style, leaned forward about the
// pelvis by `lean` radians, then placed at `pelvis`.
void place_upper(Pose& pose, const Vec3& pelvis, std::array<Vec3, kJointCount>& offsets,
                 double lean) {
  const double c = std::cos(lean);
  const double s = std::sin(lean);
  for (const auto& [joint, rest] : kUpperRest) {
    (void)rest;
    const Vec3& o = offsets[joint];
    pose.p[joint] = pelvis + Vec3(o.x(), o.y() * c - o.z() * s, o.y() * s + o.z() * c);
  }
}

std::array<Vec3, kJointCount> rest_offsets() {
  std::array<Vec3, kJointCount> out;
  out.fill(Vec3::Zero());
  for (const auto& [joint, rest] : kUpperRest) {
    out[joint] = Vec3(rest[0], rest[1], rest[2]);
  }
  return out;
}

std::string_view style_text(Style style) {
  switch (style) {
    case Style::kWalk:
      return "walk forward at a steady pace";
    case Style::kRun:
      return "run forward quickly";
    case Style::kWave:
      return "wave the right hand while standing";
    case Style::kIdle:
      return "idle standing still";
  }
  return "";
}

}  // namespace

std::string_view style_name(Style style) noexcept {
  switch (style) {
    case Style::kWalk:
      return "walk";
    case Style::kRun:
      return "run";
    case Style::kWave:
      return "wave";
    case Style::kIdle:
      return "idle";
  }
  return "";
}

std::optional<Style> parse_style(std::string_view name) noexcept {
  for (const Style s : kAllStyles) {
    if (style_name(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

std::vector<std::string> style_vocabulary() {
  std::vector<std::string> out;
  for (const Style s : kAllStyles) {
    out.emplace_back(style_name(s));
  }
  return out;
}

AnnotatedMotion generate_clip(const SyntheticRecipe& recipe) {
  if (recipe.n_frames < kMinSyntheticFrames) {
    throw InvalidArgument("synthetic clips need at least " +
                          std::to_string(kMinSyntheticFrames) + " frames, got " +
                          std::to_string(recipe.n_frames));
  }
  std::mt19937_64 rng(recipe.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const double jitter_sigma = 0.0015;
  double lean_deg = 0.0;
  GaitParams gait{};
  switch (recipe.style) {
    case Style::kWalk:
      gait = {uniform(1.1, 1.3), uniform(1.0, 1.2), 0.6, 0.10, 0.02, 0.15, uniform(0.0, 1.0)};
      lean_deg = 3.0 + uniform(-2.0, 2.0);
      break;
    case Style::kRun:
      gait = {uniform(2.4, 2.8), uniform(0.65, 0.75), 0.4, 0.18, 0.04, 0.25, uniform(0.0, 1.0)};
      lean_deg = 14.0 + uniform(-2.0, 2.0);
      break;
    case Style::kWave:
    case Style::kIdle:
      lean_deg = uniform(-2.0, 2.0);
      break;
  }
  const double lean = lean_deg * kPi / 180.0;
  const double wave_freq = uniform(1.2, 1.8);
  const double wave_phase = uniform(0.0, 2.0 * kPi);
  const double sway_freq = uniform(0.15, 0.3);
  const double sway_phase = uniform(0.0, 2.0 * kPi);
  const double stance_half_width = uniform(0.10, 0.13);

  std::normal_distribution<double> jitter(0.0, jitter_sigma);
  const Skeleton& sk = *Skeleton::humanml3d();
  std::vector<double> data;
  data.reserve(recipe.n_frames * sk.joint_count() * 3);

  const double g0 = recipe.ground_y;
  for (std::size_t f = 0; f < recipe.n_frames; ++f) {
    const double t = static_cast<double>(f) / recipe.fps;
    Pose pose;
    auto offsets = rest_offsets();
    Vec3 pelvis;
    if (recipe.style == Style::kWalk || recipe.style == Style::kRun) {
      const double u = t / gait.period + gait.phase;
      pelvis = Vec3(0.0, g0 + kPelvisHeight + gait.bob * std::cos(4.0 * kPi * u),
                    gait.speed * t);
      const Vec3 left = gait_foot(gait, u, kHipHalfWidth, g0);
      const Vec3 right = gait_foot(gait, u + 0.5, -kHipHalfWidth, g0);
      place_legs(pose, pelvis, left, right);
      // Arms swing against the leg on the same side.
      const double swing = gait.arm_swing * std::sin(2.0 * kPi * u);
      offsets[kLeftWrist].z() -= swing;
      offsets[kLeftElbow].z() -= 0.5 * swing;
      offsets[kRightWrist].z() += swing;
      offsets[kRightElbow].z() += 0.5 * swing;
    } else {
      const double sway = 0.004 * std::sin(2.0 * kPi * sway_freq * t + sway_phase);
      pelvis = Vec3(sway, g0 + kPelvisHeight, 0.0);
      place_legs(pose, pelvis, Vec3(stance_half_width, g0, 0.0),
                 Vec3(-stance_half_width, g0, 0.0));
      const double breath = 0.004 * std::sin(2.0 * kPi * 0.3 * t + sway_phase);
      for (Joint j : {kSpine3, kNeck, kHead, kLeftCollar, kRightCollar, kLeftShoulder,
                      kRightShoulder}) {
        offsets[j].y() += breath;
      }
      if (recipe.style == Style::kWave) {
        // Forearm raised, wrist sweeping side to side.
        const double sweep = 0.15 * std::sin(2.0 * kPi * wave_freq * t + wave_phase);
        offsets[kRightElbow] = Vec3(-0.34, 0.45, 0.08);
        offsets[kRightWrist] = Vec3(-0.34 + sweep, 0.70, 0.10);
      }
    }
    place_upper(pose, pelvis, offsets, lean);
    pose.p[kPelvis] = pelvis;

    for (std::size_t j = 0; j < kJointCount; ++j) {
      for (int axis = 0; axis < 3; ++axis) {
        data.push_back(pose.p[j][axis] + jitter(rng));
      }
    }
  }
  MotionSequence motion(Skeleton::humanml3d(), recipe.fps, std::move(data));
  return AnnotatedMotion(std::move(motion),
                         TimedScript::single(std::string(style_text(recipe.style)),
                                             recipe.n_frames));
}

std::vector<SyntheticRecipe> make_recipes(std::size_t count, std::size_t min_frames,
                                          std::size_t max_frames, std::span<const Style> styles,
                                          std::uint64_t seed) {
  if (styles.empty()) {
    throw InvalidArgument("at least one style is required");
  }
  if (min_frames > max_frames) {
    throw InvalidArgument("min_frames exceeds max_frames");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_style(0, styles.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_len(min_frames, max_frames);
  std::vector<SyntheticRecipe> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SyntheticRecipe r;
    r.style = styles[pick_style(rng)];
    r.n_frames = pick_len(rng);
    r.seed = rng();
    out.push_back(r);
  }
  return out;
}

std::optional<Style> style_of(const AnnotatedMotion& clip) {
  const std::string& text = clip.script().segments().front().text;
  const auto end = text.find(' ');
  return parse_style(std::string_view(text).substr(0, end));
}

}  // namespace motionsplice
