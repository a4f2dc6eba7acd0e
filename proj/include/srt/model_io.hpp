#pragma once

#include <cstdint>
#include <filesystem>

#include "srt/aft.hpp"

namespace srt::aft {

/// Serialize a fit to JSON (aft-canonical convention). Doubles survive the
/// round trip bit-exactly; saving a reloaded model reproduces the file.
void save_model_json(const AftFit& fit, const std::filesystem::path& path,
                     std::uint64_t seed = 0);

AftFit load_model_json(const std::filesystem::path& path);

}  // namespace srt::aft
