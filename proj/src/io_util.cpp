#include "w2gas/io_util.hpp"

#include <filesystem>

namespace w2gas {

void ensure_parent_dir(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void atomic_write(const std::string& path,
                  const std::function<void(std::ostream&)>& writer,
                  bool binary) {
  ensure_parent_dir(path);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("atomic_write: cannot open '" + tmp + "'");
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("atomic_write: write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace w2gas
