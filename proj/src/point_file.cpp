#include "mvd/point_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

namespace mvd {
namespace {

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(strip(line.substr(start)));
            break;
        }
        fields.push_back(strip(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    const auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e && !s.empty();
}

bool parse_id(const std::string& s, PointId& out) {
    std::uint64_t v = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e || s.empty()) return false;
    if (v >= kInvalidPointId) return false;
    out = static_cast<PointId>(v);
    return true;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ParsedPoints read_point_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open point file: " + file.string());

    ParsedPoints out;
    std::map<std::pair<double, double>, PointId> coords;
    std::unordered_map<PointId, std::size_t> id_lines;
    int arity = 0;  // 2 or 3 once determined
    bool saw_data = false;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> fields = split_csv(t);

        if (!saw_data && (t == "id,x,y" || t == "x,y")) continue;  // header

        if (fields.size() != 2 && fields.size() != 3)
            throw PointFileError(file, line_no,
                                 "malformed record: expected 'id,x,y' or 'x,y', got '" + t + "'");
        if (arity == 0) arity = static_cast<int>(fields.size());
        if (static_cast<int>(fields.size()) != arity)
            throw PointFileError(file, line_no,
                                 "inconsistent column count (file started with " +
                                     std::to_string(arity) + " columns)");

        PointId id;
        Point p{};
        if (arity == 3) {
            if (!parse_id(fields[0], id))
                throw PointFileError(file, line_no, "invalid id '" + fields[0] + "'");
            if (!parse_double(fields[1], p.x) || !parse_double(fields[2], p.y))
                throw PointFileError(file, line_no, "invalid coordinate");
        } else {
            id = static_cast<PointId>(out.points.size());
            if (!parse_double(fields[0], p.x) || !parse_double(fields[1], p.y))
                throw PointFileError(file, line_no, "invalid coordinate");
        }
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw PointFileError(file, line_no, "non-finite coordinate");

        const auto [it, fresh_id] = id_lines.emplace(id, line_no);
        if (!fresh_id)
            throw PointFileError(file, line_no,
                                 "id " + std::to_string(id) + " already used on line " +
                                     std::to_string(it->second));

        const std::pair<double, double> key{p.x == 0.0 ? 0.0 : p.x,
                                            p.y == 0.0 ? 0.0 : p.y};
        const auto [cit, fresh_coord] = coords.emplace(key, id);
        if (!fresh_coord)
            throw PointFileError(file, line_no,
                                 "duplicate coordinates (" + fields[arity - 2] + ", " +
                                     fields[arity - 1] + "): id " + std::to_string(id) +
                                     " collides with id " + std::to_string(cit->second));

        out.points.emplace_back(id, p);
        saw_data = true;
    }
    out.had_ids = arity == 3;
    return out;
}

void write_point_file(const std::filesystem::path& file,
                      const std::vector<std::pair<PointId, Point>>& points,
                      const std::string& comment) {
    std::ofstream outf(file, std::ios::binary);  // binary: byte-stable newlines
    if (!outf) throw std::runtime_error("cannot write point file: " + file.string());
    if (!comment.empty()) outf << "# " << comment << "\n";
    outf << "id,x,y\n";
    for (const auto& [id, p] : points)
        outf << id << "," << format_double(p.x) << "," << format_double(p.y) << "\n";
    if (!outf) throw std::runtime_error("write failed: " + file.string());
}

std::vector<PointId> read_id_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open id file: " + file.string());
    std::vector<PointId> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        PointId id;
        if (!parse_id(t, id))
            throw PointFileError(file, line_no, "invalid id '" + t + "'");
        ids.push_back(id);
    }
    return ids;
}

}  // namespace mvd
