// Binary ensemble snapshots and CSV export. The binary layout is fixed and
// little-endian:
//   bytes 0..7    magic "W2GASNAP"
//   u32           format version (currently 1)
//   u32           dimension d
//   u64           particle count N
//   f64           ensemble clock
//   u64           master seed of the run that wrote it
//   N*d f64       velocities, particle-major (components of particle i are
//                 contiguous)
// Writes go through a temp file and an atomic rename.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "w2gas/dynamics.hpp"

namespace w2gas {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  VelocityEnsemble ens;
  std::uint64_t seed = 0;
  std::uint32_t version = kSnapshotVersion;
};

void save_snapshot(const std::string& path, const VelocityEnsemble& ens,
                   std::uint64_t seed);
Snapshot load_snapshot(const std::string& path);

// One particle per row; header names the components (v or vx,vy,vz).
void write_ensemble_csv(std::ostream& out, const VelocityEnsemble& ens);

}  // namespace w2gas
