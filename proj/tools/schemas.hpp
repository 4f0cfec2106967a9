#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qovae/repr/vocabulary.hpp"

namespace qovae::tool {

/// Splits one CSV line, honoring double-quoted fields.
std::vector<std::string> split_csv(const std::string& line);

/// Names accepted by `validate --kind`.
std::vector<std::string> schema_kinds();

/// Checks a written artifact against its documented layout. Returns the
/// problems found (empty when valid); throws on an unknown kind.
/// `vocab` is used for dataset files only.
std::vector<std::string> validate_file(const std::string& kind, const std::filesystem::path& path,
                                       const repr::Vocabulary& vocab);

}  // namespace qovae::tool
