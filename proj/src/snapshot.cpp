#include "mvd/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mvd/point_file.hpp"

namespace mvd {
namespace {

class LineReader {
public:
    explicit LineReader(const std::string& text) : text_(text) {}

    std::string next() {
        if (pos_ >= text_.size()) fail("unexpected end of snapshot");
        const std::size_t nl = text_.find('\n', pos_);
        std::string line = text_.substr(pos_, nl == std::string::npos ? nl : nl - pos_);
        pos_ = nl == std::string::npos ? text_.size() : nl + 1;
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("snapshot line " + std::to_string(line_no_) + ": " + what);
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

std::uint64_t parse_u64(LineReader& r, const std::string& s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        r.fail("expected integer, got '" + s + "'");
    return v;
}

double parse_f64(LineReader& r, const std::string& s) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        r.fail("expected number, got '" + s + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string expect_kv(LineReader& r, const std::string& key) {
    const std::string line = r.next();
    const auto fields = split_ws(line);
    if (fields.size() != 2 || fields[0] != key)
        r.fail("expected '" + key + " <value>', got '" + line + "'");
    return fields[1];
}

}  // namespace

std::string snapshot_to_string(const MvdIndex& index) {
    std::string out = "mvd-snapshot v1\n";
    out += "k " + std::to_string(index.k()) + "\n";
    out += "seed " + std::to_string(index.seed()) + "\n";
    out += "max_id " + std::to_string(index.max_id_seen()) + "\n";

    const std::vector<PointId> ids = index.layer(0).vertex_ids();
    out += "points " + std::to_string(ids.size()) + "\n";
    for (const PointId id : ids) {
        const Point p = index.point_of(id);
        out += std::to_string(id) + " " + format_double(p.x) + " " + format_double(p.y) + "\n";
    }

    out += "layers " + std::to_string(index.layer_count()) + "\n";
    for (std::size_t i = 0; i < index.layer_count(); ++i) {
        const std::vector<PointId> layer_ids = index.layer(i).vertex_ids();
        out += "layer " + std::to_string(i) + " " + std::to_string(layer_ids.size()) + "\n";
        std::string row;
        for (std::size_t j = 0; j < layer_ids.size(); ++j) {
            if (j) row += " ";
            row += std::to_string(layer_ids[j]);
        }
        out += row + "\n";
    }
    out += "end\n";
    return out;
}

MvdIndex snapshot_from_string(const std::string& text, MvdOptions options) {
    LineReader r(text);
    if (r.next() != "mvd-snapshot v1") r.fail("unrecognized snapshot header");
    const auto k = static_cast<std::uint32_t>(parse_u64(r, expect_kv(r, "k")));
    const std::uint64_t seed = parse_u64(r, expect_kv(r, "seed"));
    const auto max_id = static_cast<PointId>(parse_u64(r, expect_kv(r, "max_id")));

    const std::uint64_t n = parse_u64(r, expect_kv(r, "points"));
    std::vector<std::pair<PointId, Point>> points;
    points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::string line = r.next();
        const auto fields = split_ws(line);
        if (fields.size() != 3) r.fail("expected '<id> <x> <y>', got '" + line + "'");
        const auto id = static_cast<PointId>(parse_u64(r, fields[0]));
        points.emplace_back(id, Point{parse_f64(r, fields[1]), parse_f64(r, fields[2])});
    }

    const std::uint64_t h = parse_u64(r, expect_kv(r, "layers"));
    if (h == 0) r.fail("snapshot must contain at least one layer");
    std::vector<std::vector<PointId>> layer_ids(h);
    for (std::uint64_t i = 0; i < h; ++i) {
        const std::string head = r.next();
        const auto fields = split_ws(head);
        if (fields.size() != 3 || fields[0] != "layer")
            r.fail("expected 'layer <i> <m>', got '" + head + "'");
        if (parse_u64(r, fields[1]) != i) r.fail("layers out of order");
        const std::uint64_t m = parse_u64(r, fields[2]);
        const auto id_fields = split_ws(r.next());
        if (id_fields.size() != m) r.fail("layer id count mismatch");
        layer_ids[i].reserve(m);
        for (const std::string& f : id_fields)
            layer_ids[i].push_back(static_cast<PointId>(parse_u64(r, f)));
    }
    if (r.next() != "end") r.fail("missing 'end' trailer");

    return MvdIndex::from_layers(points, layer_ids, k, seed, max_id, options);
}

void save_snapshot(const std::filesystem::path& file, const MvdIndex& index) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write snapshot: " + file.string());
    out << snapshot_to_string(index);
    if (!out) throw std::runtime_error("snapshot write failed: " + file.string());
}

MvdIndex load_snapshot(const std::filesystem::path& file, MvdOptions options) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return snapshot_from_string(ss.str(), options);
}

}  // namespace mvd
