#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "riem/manifold.hpp"
#include "riem/stats.hpp"

namespace riem::experiments {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Deterministic scalar source: mt19937_64 driving an explicit
/// Box–Muller transform, so streams are bit-identical across platforms
/// and standard libraries.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}
    double uniform();  // (0, 1)
    double normal();   // standard normal
private:
    std::mt19937_64 eng_;
};

struct ExperimentConfig {
    std::string experiment = "table_curvature";
    std::vector<double> c_values;  // per-experiment defaults when empty
    std::uint64_t seed = 42;
    int n_points = 20;
    double line_angle = 0.733038285837618;  // radians from the e1 axis (42 deg)
    double line_extent = 1.0;
    int m4_points = 32;
    std::string output_path = "out";
    double tol = 0.0;  // 0 = per-stage defaults
    // custom experiment: PGA over a user dataset
    std::string custom_manifold;
    std::string custom_data;
    std::string custom_mode = "variance";
    int custom_count = 0;
};

ExperimentConfig config_from_file(const std::string& path);

struct Report {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_status;  // "ok" or "failed:<stage>"
    nlohmann::ordered_json metadata;

    std::string to_csv() const;
};

/// n/2 points per line, evenly spaced on [-extent, extent] (n even, zero
/// excluded by the even spacing), along two lines at +-angle to the e1
/// axis of T_pS_c, mapped through Exp at p = (0,0,1).
std::vector<Vec> gen_two_lines(const Manifold& sc, int n, double angle, double extent);

/// Normal samples in R^4 with covariance diag(2, 1, 2/3, 1/3), lifted to
/// T_pM4 at p = (0,0,0,0,1) by the graph map (xi -> (xi, 2 xi_4)) and
/// mapped through Exp. Failed points are resampled up to 10 times.
std::vector<Vec> sample_m4(std::uint64_t seed, int n);

Report run_experiment(const ExperimentConfig& cfg);

/// Writes <out>/<name>.csv and <out>/<name>.meta.json; byte-stable for a
/// fixed config and seed.
void write_report(const Report& report, const std::string& out_dir);

}  // namespace riem::experiments
