#pragma once

#include <optional>
#include <string>
#include <vector>

#include "groupoidgen/flows.hpp"
#include "groupoidgen/genfunc.hpp"
#include "groupoidgen/graphs.hpp"
#include "groupoidgen/groupoid.hpp"
#include "groupoidgen/poisson.hpp"
#include "groupoidgen/weights.hpp"

namespace groupoidgen {

// --- Poisson structures ----------------------------------------------------
// { "dimension": d, "bivector": [ { "i":, "j":, "terms": [ { "exponents": [..], "coeff": } ] } ] }
// Only the strict upper triangle i < j is given.
PoissonStructure load_poisson(const std::string& path);
void save_poisson(const PoissonStructure& ps, const std::string& path);

// --- Graphs -----------------------------------------------------------------
// Single graph: { "n":, "edges": [ [t1, t2], ... ] }, grounds encoded -1/-2.
std::string graph_to_json_string(const KGraph& g);
KGraph graph_from_json_string(const std::string& text);

void save_trees(const std::vector<TreeGraph>& trees, const std::string& path);
std::vector<TreeGraph> load_trees(const std::string& path);

// --- Weights ----------------------------------------------------------------
// JSON-lines; one record per (graph, samples, seed) with a per-record
// checksum. Corrupted records are rejected on load.
void append_weight_record(const WeightEstimate& est, std::uint64_t seed, const std::string& path);
struct WeightRecord {
    WeightEstimate estimate;
    std::uint64_t seed = 0;
};
std::vector<WeightRecord> load_weight_records(const std::string& path);

/// Collapses records into a weight table keyed by graph; when several
/// records exist for a graph the one with the most samples wins.
WeightTable weight_table_from_records(const std::vector<WeightRecord>& records);

/// Disk-backed memo for weight_mc keyed by (graph, samples, seed).
/// Directory resolution order: explicit argument, GROUPOIDGEN_CACHE_DIR,
/// ".groupoidgen-cache".
class WeightCache {
  public:
    explicit WeightCache(std::string directory = "");
    const std::string& file_path() const { return file_; }
    WeightEstimate get_or_compute(const TreeGraph& g, std::uint64_t samples, std::uint64_t seed, int threads = 0);

  private:
    std::string file_;
};

// --- Generating functions -----------------------------------------------------
void save_genfunc(const GenFuncBuild& build, const std::string& path);
GenFuncBuild load_genfunc(const std::string& path);

// --- Point clouds -------------------------------------------------------------
std::vector<PhasePoint> make_point_cloud(int dimension, int count, double p_radius, std::uint64_t seed,
                                         const std::vector<double>& center, double x_spread);
void save_point_cloud(const std::vector<PhasePoint>& cloud, int dimension, double p_radius, std::uint64_t seed,
                      const std::string& path);
std::vector<PhasePoint> load_point_cloud(const std::string& path);

// --- Trajectories ---------------------------------------------------------------
void save_trajectory_csv(const Trajectory& traj, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit checksum as fixed-width hex.
std::string fnv1a_hex(const std::string& payload);

}  // namespace groupoidgen
