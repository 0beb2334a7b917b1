#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motionsplice/timed_script.h"

namespace motionsplice {

enum class Style { kWalk, kRun, kWave, kIdle };

inline constexpr Style kAllStyles[] = {Style::kWalk, Style::kRun, Style::kWave, Style::kIdle};

// "walk", "run", "wave", "idle". These labels double as the stitcher's
// condition vocabulary.
std::string_view style_name(Style style) noexcept;
std::optional<Style> parse_style(std::string_view name) noexcept;
std::vector<std::string> style_vocabulary();

struct SyntheticRecipe {
  Style style = Style::kWalk;
  std::size_t n_frames = 100;
  std::uint64_t seed = 0;
  double ground_y = 0.0;
  double fps = 20.0;
};

inline constexpr std::size_t kMinSyntheticFrames = 10;

// Deterministic parametric clip on the 22-joint HumanML3D skeleton, heading
// +z. Walk and run are planted gaits with alternating foot contacts, wave
// oscillates the right arm in place, idle is a standing pose with sway.
// Per-clip variation (speed, phase, upper-body lean, jitter) comes from the
// seed. The script is one segment whose first word is the style name.
// Throws InvalidArgument if n_frames < 10.
AnnotatedMotion generate_clip(const SyntheticRecipe& recipe);

// `count` recipes with styles drawn uniformly from `styles` and lengths
// uniform in [min_frames, max_frames].
std::vector<SyntheticRecipe> make_recipes(std::size_t count, std::size_t min_frames,
                                          std::size_t max_frames, std::span<const Style> styles,
                                          std::uint64_t seed);

// Condition label of a clip: the first word of its first segment when that
// word names a style.
std::optional<Style> style_of(const AnnotatedMotion& clip);

}  // namespace motionsplice
