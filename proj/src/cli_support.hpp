#pragma once

#include "pulse/cli.hpp"
#include "pulse/records.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pulse::detail {

/// Records of `task` from `model` in the classifications file; an absent
/// file yields no records.
std::vector<Classification> records_for(const std::filesystem::path& path, TaskKind task,
                                        const std::string& model);

}  // namespace pulse::detail
