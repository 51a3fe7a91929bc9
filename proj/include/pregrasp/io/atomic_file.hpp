#pragma once

#include <string>

namespace pregrasp::io {

// Writes content to path via a temp file + rename, so readers never observe
// a partially written file.
void atomic_write(const std::string& path, const std::string& content);
void atomic_write_bytes(const std::string& path, const void* data, std::size_t size);

}  // namespace pregrasp::io
