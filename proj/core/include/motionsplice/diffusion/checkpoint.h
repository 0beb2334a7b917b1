#pragma once

#include <filesystem>
#include <string>

#include "motionsplice/diffusion/stitcher.h"

namespace motionsplice::diffusion {

inline constexpr char kCheckpointMagic[8] = {'M', 'S', 'S', 'T', 'I', 'T', 'C', 'H'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary checkpoint, all integers and doubles little-endian. Layout is in
// docs/checkpoint_format.md.
std::string serialize_checkpoint(const StitcherModel& model);

// Throws ParseError (line 0, column = byte offset) on a malformed container.
StitcherModel parse_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const StitcherModel& model);
StitcherModel load_checkpoint(const std::filesystem::path& path);

}  // namespace motionsplice::diffusion
