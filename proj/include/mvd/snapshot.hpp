#pragma once

#include <filesystem>
#include <string>

#include "mvd/mvd_index.hpp"

namespace mvd {

/// Versioned plain-text snapshot of an index: the construction parameter,
/// seed, point table and per-layer id lists. Triangulation topology is not
/// stored; it is rebuilt deterministically on load, so a round trip
/// preserves layer id sets, k, seed and every query answer.
///
/// Format (line oriented, '\n', shortest round-trip floats):
///   mvd-snapshot v1
///   k <k>
///   seed <seed>
///   max_id <largest id ever assigned>
///   points <n>
///   <id> <x> <y>        (n lines, ascending id)
///   layers <h>
///   layer <i> <m>       (h blocks, layer 0 first)
///   <id> <id> ...       (m ids ascending; blank line when m = 0)
///   end
std::string snapshot_to_string(const MvdIndex& index);

MvdIndex snapshot_from_string(const std::string& text, MvdOptions options = {});

void save_snapshot(const std::filesystem::path& file, const MvdIndex& index);

MvdIndex load_snapshot(const std::filesystem::path& file, MvdOptions options = {});

}  // namespace mvd
