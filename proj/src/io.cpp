#include "groupoidgen/io.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace groupoidgen {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string fnv1a_hex(const std::string& payload) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// --- Poisson ----------------------------------------------------------------

PoissonStructure load_poisson(const std::string& path) {
    json j = json::parse(read_text_file(path));
    int d = j.at("dimension").get<int>();
    std::vector<std::tuple<int, int, MultiPoly>> entries;
    for (const auto& comp : j.at("bivector")) {
        int i = comp.at("i").get<int>();
        int k = comp.at("j").get<int>();
        MultiPoly p(d);
        for (const auto& term : comp.at("terms")) {
            auto expo = term.at("exponents").get<std::vector<int>>();
            double c = term.at("coeff").get<double>();
            p.add_term(expo, c);
        }
        entries.emplace_back(i, k, std::move(p));
    }
    return PoissonStructure::from_upper_triangle(d, entries);
}

namespace {

ordered_json poly_to_json(const MultiPoly& p) {
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : p.terms()) {
        ordered_json t;
        t["exponents"] = e;
        t["coeff"] = c;
        terms.push_back(std::move(t));
    }
    return terms;
}

MultiPoly poly_from_json(int nvars, const json& terms) {
    MultiPoly p(nvars);
    for (const auto& t : terms) p.add_term(t.at("exponents").get<std::vector<int>>(), t.at("coeff").get<double>());
    return p;
}

}  // namespace

void save_poisson(const PoissonStructure& ps, const std::string& path) {
    ordered_json j;
    j["dimension"] = ps.dimension();
    j["bivector"] = ordered_json::array();
    for (int i = 0; i < ps.dimension(); ++i) {
        for (int k = i + 1; k < ps.dimension(); ++k) {
            const MultiPoly& p = ps.component(i, k);
            if (p.is_zero()) continue;
            ordered_json comp;
            comp["i"] = i;
            comp["j"] = k;
            comp["terms"] = poly_to_json(p);
            j["bivector"].push_back(std::move(comp));
        }
    }
    write_text_file(path, j.dump(2) + "\n");
}

// --- Graphs -----------------------------------------------------------------

namespace {

ordered_json graph_to_json(const KGraph& g) {
    ordered_json j;
    j["n"] = g.n;
    ordered_json edges = ordered_json::array();
    for (int v = 1; v <= g.n; ++v) edges.push_back(ordered_json::array({g.first_target(v), g.second_target(v)}));
    j["edges"] = std::move(edges);
    return j;
}

KGraph graph_from_json(const json& j) {
    KGraph g;
    g.n = j.at("n").get<int>();
    for (const auto& pair : j.at("edges")) {
        g.gamma1.push_back(pair.at(0).get<int>());
        g.gamma2.push_back(pair.at(1).get<int>());
    }
    g.validate();
    return g;
}

}  // namespace

std::string graph_to_json_string(const KGraph& g) { return graph_to_json(g).dump(); }

KGraph graph_from_json_string(const std::string& text) { return graph_from_json(json::parse(text)); }

void save_trees(const std::vector<TreeGraph>& trees, const std::string& path) {
    ordered_json j;
    j["n"] = trees.empty() ? 0 : trees.front().n();
    j["count"] = trees.size();
    j["trees"] = ordered_json::array();
    for (const auto& t : trees) j["trees"].push_back(graph_to_json(t.graph));
    write_text_file(path, j.dump(2) + "\n");
}

std::vector<TreeGraph> load_trees(const std::string& path) {
    json j = json::parse(read_text_file(path));
    std::vector<TreeGraph> out;
    for (const auto& g : j.at("trees")) out.emplace_back(graph_from_json(g));
    return out;
}

// --- Weights ----------------------------------------------------------------

namespace {

std::string weight_payload(const KGraph& g, std::uint64_t samples, std::uint64_t seed, double value, double std_error,
                           std::uint64_t discarded) {
    std::ostringstream os;
    os.precision(17);
    os << g.key() << "|" << samples << "|" << seed << "|" << std::scientific << value << "|" << std_error << "|"
       << discarded;
    return os.str();
}

}  // namespace

void append_weight_record(const WeightEstimate& est, std::uint64_t seed, const std::string& path) {
    ordered_json j;
    j["graph"] = graph_to_json(est.graph);
    j["samples"] = est.samples;
    j["seed"] = seed;
    j["value"] = est.value;
    j["std_error"] = est.std_error;
    j["discarded"] = est.discarded;
    j["checksum"] = fnv1a_hex(weight_payload(est.graph, est.samples, seed, est.value, est.std_error, est.discarded));
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append to weight file: " + path);
    out << j.dump() << "\n";
}

std::vector<WeightRecord> load_weight_records(const std::string& path) {
    std::vector<WeightRecord> out;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open weight file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line);
        WeightRecord rec;
        rec.estimate.graph = graph_from_json(j.at("graph"));
        rec.estimate.samples = j.at("samples").get<std::uint64_t>();
        rec.estimate.value = j.at("value").get<double>();
        rec.estimate.std_error = j.at("std_error").get<double>();
        rec.estimate.discarded = j.value("discarded", 0ULL);
        rec.seed = j.at("seed").get<std::uint64_t>();
        std::string expect = fnv1a_hex(weight_payload(rec.estimate.graph, rec.estimate.samples, rec.seed,
                                                      rec.estimate.value, rec.estimate.std_error, rec.estimate.discarded));
        if (j.at("checksum").get<std::string>() != expect)
            throw std::runtime_error("weight record checksum mismatch at line " + std::to_string(lineno) + " of " + path);
        out.push_back(std::move(rec));
    }
    return out;
}

WeightTable weight_table_from_records(const std::vector<WeightRecord>& records) {
    WeightTable table;
    for (const auto& rec : records) {
        auto key = rec.estimate.graph.key();
        auto it = table.find(key);
        if (it == table.end() || it->second.samples < rec.estimate.samples) table[key] = rec.estimate;
    }
    return table;
}

WeightCache::WeightCache(std::string directory) {
    if (directory.empty()) {
        const char* env = std::getenv("GROUPOIDGEN_CACHE_DIR");
        directory = env != nullptr ? env : ".groupoidgen-cache";
    }
    std::filesystem::create_directories(directory);
    file_ = (std::filesystem::path(directory) / "weights.jsonl").string();
}

WeightEstimate WeightCache::get_or_compute(const TreeGraph& g, std::uint64_t samples, std::uint64_t seed, int threads) {
    if (std::filesystem::exists(file_)) {
        for (const auto& rec : load_weight_records(file_)) {
            if (rec.estimate.graph == g.graph && rec.estimate.samples == samples && rec.seed == seed) return rec.estimate;
        }
    }
    WeightEstimate est = weight_mc(g, samples, seed, threads);
    append_weight_record(est, seed, file_);
    return est;
}

// --- Generating functions -----------------------------------------------------

void save_genfunc(const GenFuncBuild& build, const std::string& path) {
    const GenFunc& S = build.genfunc;
    ordered_json j;
    j["dimension"] = S.dimension;
    j["order"] = S.order;
    j["M"] = S.analyticity_M;
    j["radius"] = S.radius;
    j["base_point"] = S.base_point;
    j["terms"] = ordered_json::array();
    for (int n = 1; n <= S.order; ++n) {
        ordered_json t;
        t["order"] = n;
        t["poly"] = poly_to_json(S.term(n));
        if (static_cast<int>(build.coeff_sigma.size()) >= n)
            t["coeff_sigma"] = poly_to_json(build.coeff_sigma[static_cast<std::size_t>(n - 1)]);
        j["terms"].push_back(std::move(t));
    }
    write_text_file(path, j.dump(2) + "\n");
}

GenFuncBuild load_genfunc(const std::string& path) {
    json j = json::parse(read_text_file(path));
    GenFuncBuild build;
    GenFunc& S = build.genfunc;
    S.dimension = j.at("dimension").get<int>();
    S.order = j.at("order").get<int>();
    S.analyticity_M = j.at("M").get<double>();
    S.radius = j.at("radius").get<double>();
    S.base_point = j.at("base_point").get<std::vector<double>>();
    S.terms.assign(static_cast<std::size_t>(S.order), MultiPoly(3 * S.dimension));
    build.coeff_sigma.assign(static_cast<std::size_t>(S.order), MultiPoly(3 * S.dimension));
    for (const auto& t : j.at("terms")) {
        int n = t.at("order").get<int>();
        if (n < 1 || n > S.order) throw std::runtime_error("genfunc file: term order out of range");
        S.terms[static_cast<std::size_t>(n - 1)] = poly_from_json(3 * S.dimension, t.at("poly"));
        if (t.contains("coeff_sigma"))
            build.coeff_sigma[static_cast<std::size_t>(n - 1)] = poly_from_json(3 * S.dimension, t.at("coeff_sigma"));
    }
    return build;
}

// --- Point clouds -------------------------------------------------------------

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<PhasePoint> make_point_cloud(int dimension, int count, double p_radius, std::uint64_t seed,
                                         const std::vector<double>& center, double x_spread) {
    if (dimension <= 0) throw std::invalid_argument("make_point_cloud: dimension must be positive");
    if (count < 0) throw std::invalid_argument("make_point_cloud: negative count");
    if (static_cast<int>(center.size()) != dimension) throw std::invalid_argument("make_point_cloud: center dimension mismatch");
    std::mt19937_64 rng(seed);
    std::vector<PhasePoint> cloud;
    cloud.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        std::vector<double> p(static_cast<std::size_t>(dimension));
        // uniform in the ball of radius p_radius by cube rejection
        for (;;) {
            double norm2 = 0.0;
            for (int i = 0; i < dimension; ++i) {
                p[static_cast<std::size_t>(i)] = 2.0 * uniform01(rng) - 1.0;
                norm2 += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
            }
            if (norm2 <= 1.0) break;
        }
        for (auto& c : p) c *= p_radius;
        std::vector<double> x(static_cast<std::size_t>(dimension));
        for (int i = 0; i < dimension; ++i)
            x[static_cast<std::size_t>(i)] = center[static_cast<std::size_t>(i)] + x_spread * (2.0 * uniform01(rng) - 1.0);
        cloud.emplace_back(std::move(p), std::move(x));
    }
    return cloud;
}

void save_point_cloud(const std::vector<PhasePoint>& cloud, int dimension, double p_radius, std::uint64_t seed,
                      const std::string& path) {
    ordered_json j;
    j["dimension"] = dimension;
    j["count"] = cloud.size();
    j["p_radius"] = p_radius;
    j["seed"] = seed;
    j["points"] = ordered_json::array();
    for (const auto& pt : cloud) {
        ordered_json e;
        e["p"] = pt.p;
        e["x"] = pt.x;
        j["points"].push_back(std::move(e));
    }
    write_text_file(path, j.dump(2) + "\n");
}

std::vector<PhasePoint> load_point_cloud(const std::string& path) {
    json j = json::parse(read_text_file(path));
    std::vector<PhasePoint> cloud;
    for (const auto& e : j.at("points"))
        cloud.emplace_back(e.at("p").get<std::vector<double>>(), e.at("x").get<std::vector<double>>());
    return cloud;
}

void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    if (!traj.states.empty())
        for (std::size_t i = 0; i < traj.states.front().size(); ++i) os << ",c" << i;
    os << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << traj.times[k];
        for (double c : traj.states[k]) os << "," << c;
        os << "\n";
    }
    write_text_file(path, os.str());
}

}  // namespace groupoidgen
