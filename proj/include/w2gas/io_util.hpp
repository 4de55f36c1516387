// Small file/formatting helpers shared by every writer: atomic replace via
// temp file + rename, and a canonical shortest-roundtrip float format so
// identical runs produce identical bytes.
#pragma once

#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>

namespace w2gas {

inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Writes through `<path>.tmp` and renames over the target, so readers never
// observe a partial file.
void atomic_write(const std::string& path,
                  const std::function<void(std::ostream&)>& writer,
                  bool binary = false);

// Creates the parent directory of `path` when missing.
void ensure_parent_dir(const std::string& path);

}  // namespace w2gas
