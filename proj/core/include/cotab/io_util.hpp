#pragma once

#include <string>

namespace cotab {

/// Whole-file atomic write: the content goes to a temporary sibling first and
/// is renamed into place, so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

} // namespace cotab
