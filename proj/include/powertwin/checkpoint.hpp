#pragma once

#include "powertwin/pipeline.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace powertwin::checkpoint {

inline constexpr std::string_view kMagic = "POWERTWIN-CKPT 1";

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Versioned text container: magic line, `key = value` header (role, domain,
/// configs, seed, scalers, loss history, caller metadata), then one
/// `block <name> <rows> <cols>` line per parameter block followed by its values.
/// Doubles are written in shortest round-trip form, so load(save(m)) == m.
std::string format_checkpoint(const pipeline::SequenceModel& model, const Metadata& metadata = {});
/// Throws IoError on a wrong magic line or malformed content and
/// DimensionError when a block disagrees with the stored configuration.
pipeline::SequenceModel parse_checkpoint(std::string_view text, Metadata* metadata = nullptr);

void save_checkpoint(const std::filesystem::path& path, const pipeline::SequenceModel& model,
                     const Metadata& metadata = {});
pipeline::SequenceModel load_checkpoint(const std::filesystem::path& path, Metadata* metadata = nullptr);

} // namespace powertwin::checkpoint
