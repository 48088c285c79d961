// Command-line surface for the MVD spatial index: build/query/update a
// persisted index, generate synthetic point files and run the benchmark
// grid against the kd-tree and linear-scan baselines.

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "mvd/bench.hpp"
#include "mvd/errors.hpp"
#include "mvd/mvd_index.hpp"
#include "mvd/point_file.hpp"
#include "mvd/snapshot.hpp"
#include "mvd/workload.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 6180339;

std::string layer_sizes_string(const mvd::MvdIndex& index) {
    std::string s;
    for (const std::size_t n : index.layer_sizes()) {
        if (!s.empty()) s += ",";
        s += std::to_string(n);
    }
    return s;
}

mvd::Point parse_xy(const std::string& arg) {
    const std::size_t comma = arg.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("query", "expected 'x,y', got '" + arg + "'");
    mvd::Point p{};
    const std::string xs = arg.substr(0, comma);
    const std::string ys = arg.substr(comma + 1);
    const auto rx = std::from_chars(xs.data(), xs.data() + xs.size(), p.x);
    const auto ry = std::from_chars(ys.data(), ys.data() + ys.size(), p.y);
    if (rx.ec != std::errc() || rx.ptr != xs.data() + xs.size() ||
        ry.ec != std::errc() || ry.ptr != ys.data() + ys.size() ||
        !std::isfinite(p.x) || !std::isfinite(p.y))
        throw CLI::ValidationError("query", "invalid coordinates '" + arg + "'");
    return p;
}

mvd::Workload::Dist parse_dist(const std::string& s, bool allow_file) {
    if (s == "uniform") return mvd::Workload::Dist::Uniform;
    if (s == "exp") return mvd::Workload::Dist::Exponential;
    if (allow_file && s == "file") return mvd::Workload::Dist::File;
    throw CLI::ValidationError("--dist", "unknown distribution '" + s + "'");
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

int cmd_build(const std::string& input, const std::string& output, std::uint32_t k,
              std::uint64_t seed) {
    const mvd::ParsedPoints parsed = mvd::read_point_file(input);
    const auto t0 = std::chrono::steady_clock::now();
    const mvd::MvdIndex index = mvd::MvdIndex::build(parsed.points, k, seed);
    const double ms = ms_since(t0);
    mvd::save_snapshot(output, index);
    std::printf("build n=%zu k=%u seed=%llu layers=%zu sizes=%s ms=%.3f\n", index.size(),
                index.k(), static_cast<unsigned long long>(index.seed()),
                index.layer_count(), layer_sizes_string(index).c_str(), ms);
    std::printf("snapshot written to %s\n", output.c_str());
    return 0;
}

int cmd_query(const std::string& snapshot, const std::string& xy,
              std::size_t k_query) {
    const mvd::MvdIndex index = mvd::load_snapshot(snapshot);
    const mvd::Point q = parse_xy(xy);
    mvd::QueryStats stats;
    std::vector<mvd::PointId> ids;
    if (k_query <= 1) {
        ids.push_back(index.nn(q, stats));
    } else {
        ids = index.knn(q, k_query, stats).ids;
    }
    for (const mvd::PointId id : ids) {
        const double d = std::sqrt(mvd::dist2(q, index.point_of(id)));
        std::printf("id=%u dist=%s\n", id, mvd::format_double(d).c_str());
    }
    std::printf("evals=%llu visited=%llu layers=%llu\n",
                static_cast<unsigned long long>(stats.distance_evaluations),
                static_cast<unsigned long long>(stats.points_visited),
                static_cast<unsigned long long>(stats.layers_traversed));
    return 0;
}

int cmd_update(const std::string& snapshot, const std::string& inserts,
               const std::string& deletes, bool no_demotion) {
    mvd::MvdOptions options;
    options.demotion_repair = !no_demotion;
    mvd::MvdIndex index = mvd::load_snapshot(snapshot, options);

    // Deletes are applied before inserts.
    std::size_t n_deleted = 0, n_inserted = 0;
    if (!deletes.empty()) {
        for (const mvd::PointId id : mvd::read_id_file(deletes)) {
            index.erase(id);
            ++n_deleted;
        }
    }
    if (!inserts.empty()) {
        const mvd::ParsedPoints parsed = mvd::read_point_file(inserts);
        mvd::PointId next = index.size() || index.max_id_seen() ? index.max_id_seen() + 1 : 0;
        for (const auto& [id, p] : parsed.points) {
            index.insert(parsed.had_ids ? id : next++, p);
            ++n_inserted;
        }
    }
    mvd::save_snapshot(snapshot, index);
    std::printf("update deletes=%zu inserts=%zu n=%zu layers=%zu sizes=%s\n", n_deleted,
                n_inserted, index.size(), index.layer_count(),
                layer_sizes_string(index).c_str());
    std::printf("snapshot written to %s\n", snapshot.c_str());
    return 0;
}

int cmd_gen(const std::string& dist, std::size_t n, std::uint64_t seed,
            const std::string& output) {
    mvd::Workload w;
    w.dist = parse_dist(dist, false);
    w.n = n;
    w.seed = seed;
    const auto points = mvd::gen_points(w);
    mvd::write_point_file(output, points,
                          "mvd gen dist=" + dist + " n=" + std::to_string(n) +
                              " seed=" + std::to_string(seed));
    std::printf("gen dist=%s n=%zu seed=%llu file=%s\n", dist.c_str(), n,
                static_cast<unsigned long long>(seed), output.c_str());
    return 0;
}

int cmd_bench(const std::string& dist, const std::string& input,
              const std::string& sizes_csv, const std::string& k_list_csv,
              std::size_t trials, std::size_t queries, std::uint64_t seed,
              std::uint32_t mvd_k, std::size_t leaf, const std::string& indices_csv,
              const std::string& output) {
    mvd::BenchConfig config;
    config.dist = parse_dist(dist, true);
    config.seed = seed;
    config.trials = trials;
    config.query_count = queries;
    config.mvd_k = mvd_k;
    config.kd_leaf_capacity = leaf;

    if (config.dist == mvd::Workload::Dist::File) {
        if (input.empty())
            throw CLI::ValidationError("--dist", "file distribution requires --input");
        config.file_points = mvd::read_point_file(input).points;
    } else if (!input.empty()) {
        throw CLI::ValidationError("--input", "--input requires --dist file");
    } else if (sizes_csv.empty()) {
        throw CLI::ValidationError("--sizes", "synthetic benches require --sizes");
    }

    const auto parse_size_list = [](const std::string& csv) {
        std::vector<std::size_t> out;
        std::size_t start = 0;
        while (start <= csv.size() && !csv.empty()) {
            const std::size_t comma = csv.find(',', start);
            const std::string tok =
                csv.substr(start, comma == std::string::npos ? comma : comma - start);
            std::size_t v = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v == 0)
                throw CLI::ValidationError("list", "invalid entry '" + tok + "'");
            out.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    };
    if (!sizes_csv.empty()) config.sizes = parse_size_list(sizes_csv);
    if (!k_list_csv.empty()) config.k_list = parse_size_list(k_list_csv);

    if (!indices_csv.empty()) {
        config.indices.clear();
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = indices_csv.find(',', start);
            const std::string tok =
                indices_csv.substr(start, comma == std::string::npos ? comma : comma - start);
            const auto kind = mvd::index_kind_from_string(tok);
            if (!kind) throw CLI::ValidationError("--indices", "unknown index '" + tok + "'");
            config.indices.push_back(*kind);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }

    const mvd::BenchReport report = mvd::run_grid(config);

    std::ofstream csv(output, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write report: " + output);
    csv << report.to_csv();
    csv.close();

    std::filesystem::path md_path(output);
    md_path.replace_extension(".md");
    std::ofstream md(md_path, std::ios::binary);
    if (!md) throw std::runtime_error("cannot write report: " + md_path.string());
    md << "# MVD benchmark report\n\nseed " << report.seed << ", "
       << report.query_count << " queries x " << report.trials << " trials, "
       << report.distribution << " data. " << report.notes << "\n\n"
       << report.to_markdown();
    md.close();

    std::printf("bench rows=%zu csv=%s md=%s\n", report.rows.size(), output.c_str(),
                md_path.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MVD spatial index: exact NN/kNN queries over dynamic 2-D point sets"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "Build an index from a point file");
    std::string build_input, build_output;
    std::uint32_t build_k = 100;
    std::uint64_t build_seed = kDefaultSeed;
    build->add_option("--input", build_input, "CSV point file (id,x,y or x,y)")->required();
    build->add_option("--output", build_output, "snapshot path")->required();
    build->add_option("--k", build_k, "construction parameter k (>= 2)")
        ->default_val(100);
    build->add_option("--seed", build_seed, "sampling seed")->default_val(kDefaultSeed);

    // query
    auto* query = app.add_subcommand("query", "Run one NN/kNN query against a snapshot");
    std::string query_snapshot, query_xy;
    std::size_t query_k = 1;
    query->add_option("snapshot", query_snapshot, "snapshot path")->required();
    query->add_option("point", query_xy, "query point as 'x,y'")->required();
    query->add_option("--knn", query_k, "number of neighbors (default 1)");

    // update
    auto* update = app.add_subcommand(
        "update", "Apply deletes then inserts to a snapshot, in that order");
    std::string update_snapshot, update_inserts, update_deletes;
    bool update_no_demotion = false;
    update->add_option("snapshot", update_snapshot, "snapshot path")->required();
    update->add_option("--inserts", update_inserts, "CSV point file to insert");
    update->add_option("--deletes", update_deletes, "file with one id per line");
    update->add_flag("--no-demotion", update_no_demotion,
                     "disable ratio-repair demotion on deletes");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic point file");
    std::string gen_dist = "uniform", gen_output;
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = kDefaultSeed;
    gen->add_option("--dist", gen_dist, "uniform|exp")->default_val("uniform");
    gen->add_option("--n", gen_n, "point count")->required();
    gen->add_option("--seed", gen_seed, "generation seed")->default_val(kDefaultSeed);
    gen->add_option("--output", gen_output, "CSV output path")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run the benchmark grid (CSV + Markdown)");
    std::string bench_dist = "uniform", bench_input, bench_sizes, bench_klist;
    std::string bench_indices, bench_output;
    std::size_t bench_trials = 5, bench_queries = 1000, bench_leaf = 100;
    std::uint32_t bench_k = 100;
    std::uint64_t bench_seed = kDefaultSeed;
    bench->add_option("--dist", bench_dist, "uniform|exp|file")->default_val("uniform");
    bench->add_option("--input", bench_input, "point file for --dist file");
    bench->add_option("--sizes", bench_sizes, "comma-separated point counts");
    bench->add_option("--k-list", bench_klist,
                      "comma-separated kNN sizes (omit for NN-only)");
    bench->add_option("--trials", bench_trials, "timing repetitions")->default_val(5);
    bench->add_option("--queries", bench_queries, "queries per cell")->default_val(1000);
    bench->add_option("--seed", bench_seed, "workload seed")->default_val(kDefaultSeed);
    bench->add_option("--k", bench_k, "MVD construction parameter")->default_val(100);
    bench->add_option("--leaf", bench_leaf, "kd-tree leaf capacity")->default_val(100);
    bench->add_option("--indices", bench_indices, "subset of mvd,kdtree,scan");
    bench->add_option("--output", bench_output, "CSV report path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) return cmd_build(build_input, build_output, build_k, build_seed);
        if (*query) return cmd_query(query_snapshot, query_xy, query_k);
        if (*update)
            return cmd_update(update_snapshot, update_inserts, update_deletes,
                              update_no_demotion);
        if (*gen) return cmd_gen(gen_dist, gen_n, gen_seed, gen_output);
        if (*bench)
            return cmd_bench(bench_dist, bench_input, bench_sizes, bench_klist,
                             bench_trials, bench_queries, bench_seed, bench_k,
                             bench_leaf, bench_indices, bench_output);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
