#include <set>

#include <gtest/gtest.h>

#include "motionsplice/error.h"
#include "motionsplice/synthetic.h"

namespace motionsplice {
namespace {

TEST(Synthetic, StyleNames) {
  for (const Style s : kAllStyles) {
    EXPECT_EQ(parse_style(style_name(s)), s);
  }
  EXPECT_FALSE(parse_style("dance").has_value());
  EXPECT_EQ(style_vocabulary(), (std::vector<std::string>{"walk", "run", "wave", "idle"}));
}

TEST(Synthetic, ClipShapeAndScript) {
  for (const Style s : kAllStyles) {
    const auto clip = generate_clip(SyntheticRecipe{s, 77, 4});
    EXPECT_EQ(clip.frame_count(), 77u);
    EXPECT_EQ(clip.motion().joint_count(), 22u);
    EXPECT_EQ(clip.motion().skeleton(), *Skeleton::humanml3d());
    EXPECT_EQ(clip.motion().fps(), 20.0);
    ASSERT_EQ(clip.script().size(), 1u);
    EXPECT_EQ(style_of(clip), s);
  }
  EXPECT_THROW(generate_clip(SyntheticRecipe{Style::kWalk, 9, 0}), InvalidArgument);
}

TEST(Synthetic, Deterministic) {
  const SyntheticRecipe r{Style::kWave, 120, 42};
  EXPECT_EQ(generate_clip(r), generate_clip(r));
  SyntheticRecipe other = r;
  other.seed = 43;
  EXPECT_NE(generate_clip(r).motion(), generate_clip(other).motion());
}

TEST(Synthetic, FeetRestOnGround) {
  for (const double g : {0.0, -0.3, 1.25}) {
    SyntheticRecipe r{Style::kWalk, 100, 2};
    r.ground_y = g;
    const auto m = generate_clip(r).motion();
    const auto& sj = m.skeleton().special();
    double lowest = 1e9;
    for (std::size_t f = 0; f < m.frame_count(); ++f) {
      lowest = std::min(
          {lowest, m.position(f, sj.left_foot).y(), m.position(f, sj.right_foot).y()});
    }
    EXPECT_NEAR(lowest, g, 0.02);
  }
}

TEST(Synthetic, GaitsTravelForwardOthersStayPut) {
  for (const Style s : kAllStyles) {
    const auto m = generate_clip(SyntheticRecipe{s, 100, 6}).motion();
    const Vec3 d = m.root(99) - m.root(0);
    if (s == Style::kWalk || s == Style::kRun) {
      EXPECT_GT(d.z(), 1.0);
    } else {
      EXPECT_LT(std::hypot(d.x(), d.z()), 0.2);
    }
  }
}

TEST(MakeRecipes, RangesAndDeterminism) {
  const std::vector<Style> two = {Style::kRun, Style::kIdle};
  const auto a = make_recipes(300, 50, 200, two, 9);
  ASSERT_EQ(a.size(), 300u);
  std::set<Style> seen;
  std::set<std::uint64_t> seeds;
  for (const auto& r : a) {
    EXPECT_GE(r.n_frames, 50u);
    EXPECT_LE(r.n_frames, 200u);
    seen.insert(r.style);
    seeds.insert(r.seed);
  }
  EXPECT_EQ(seen, (std::set<Style>{Style::kRun, Style::kIdle}));
  EXPECT_EQ(seeds.size(), 300u);
  const auto b = make_recipes(300, 50, 200, two, 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].n_frames, b[i].n_frames);
    EXPECT_EQ(a[i].seed, b[i].seed);
  }
  EXPECT_THROW(make_recipes(1, 50, 200, {}, 0), InvalidArgument);
  EXPECT_THROW(make_recipes(1, 201, 200, two, 0), InvalidArgument);
}

}  // namespace
}  // namespace motionsplice
