#include "w2gas/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>

#include "w2gas/io_util.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts are not "
              "supported");

namespace w2gas {

namespace {

constexpr char kMagic[8] = {'W', '2', 'G', 'A', 'S', 'N', 'A', 'P'};

template <class T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
T get(std::istream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw std::runtime_error("snapshot '" + path + "': truncated");
  return value;
}

}  // namespace

void save_snapshot(const std::string& path, const VelocityEnsemble& ens,
                   std::uint64_t seed) {
  atomic_write(
      path,
      [&](std::ostream& out) {
        out.write(kMagic, sizeof kMagic);
        put(out, kSnapshotVersion);
        put(out, static_cast<std::uint32_t>(ens.dim()));
        put(out, static_cast<std::uint64_t>(ens.size()));
        put(out, ens.time);
        put(out, seed);
        // Column-major d x N storage is already particle-major on disk.
        out.write(reinterpret_cast<const char*>(ens.v.data()),
                  static_cast<std::streamsize>(sizeof(double) * ens.v.size()));
      },
      /*binary=*/true);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot '" + path + "': cannot open");

  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("snapshot '" + path + "': bad magic");

  Snapshot snap;
  snap.version = get<std::uint32_t>(in, path);
  if (snap.version != kSnapshotVersion)
    throw std::runtime_error("snapshot '" + path + "': unsupported version " +
                             std::to_string(snap.version));
  const auto d = get<std::uint32_t>(in, path);
  const auto n = get<std::uint64_t>(in, path);
  if (d < 1 || d > 3)
    throw std::runtime_error("snapshot '" + path + "': bad dimension");
  if (n == 0 || n > (1ULL << 31))
    throw std::runtime_error("snapshot '" + path + "': bad particle count");
  snap.ens.time = get<double>(in, path);
  snap.seed = get<std::uint64_t>(in, path);

  snap.ens.v.resize(d, static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(snap.ens.v.data()),
          static_cast<std::streamsize>(sizeof(double) * snap.ens.v.size()));
  if (!in) throw std::runtime_error("snapshot '" + path + "': truncated");
  return snap;
}

void write_ensemble_csv(std::ostream& out, const VelocityEnsemble& ens) {
  const int d = ens.dim();
  if (d == 1)
    out << "v\n";
  else if (d == 2)
    out << "vx,vy\n";
  else
    out << "vx,vy,vz\n";
  for (int i = 0; i < ens.size(); ++i) {
    for (int r = 0; r < d; ++r) {
      if (r) out << ',';
      out << fmt_g17(ens.v(r, i));
    }
    out << '\n';
  }
}

}  // namespace w2gas
