#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mvd/geometry.hpp"

namespace mvd {

/// A point-file record failed validation; the message cites the line.
class PointFileError : public std::runtime_error {
public:
    PointFileError(const std::filesystem::path& file, std::size_t line,
                   const std::string& what)
        : std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + what),
          line(line) {}

    std::size_t line;
};

struct ParsedPoints {
    std::vector<std::pair<PointId, Point>> points;
    bool had_ids = false;
};

/// Reads a CSV point file: one `id,x,y` or `x,y` record per line, optional
/// `id,x,y` / `x,y` header, `#` comments ignored, UTF-8. Rejects NaN/inf
/// coordinates, malformed records, repeated ids and duplicate coordinates
/// (citing both offending ids). Files without an id column get dense ids.
ParsedPoints read_point_file(const std::filesystem::path& file);

/// Writes `id,x,y` records with shortest round-trip float formatting.
void write_point_file(const std::filesystem::path& file,
                      const std::vector<std::pair<PointId, Point>>& points,
                      const std::string& comment = {});

/// Reads one point id per line, `#` comments ignored.
std::vector<PointId> read_id_file(const std::filesystem::path& file);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

}  // namespace mvd
