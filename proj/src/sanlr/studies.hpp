#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sanlr/dimension_tree.hpp"

namespace sanlr {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// block size 0 stands for "half": max(1, d / 2)
std::size_t resolve_block_size(std::size_t d, std::size_t b);

// geometric mean ratio r[n-1] / r[m] over the second half of a residual curve
double fit_asymptotic_rate(const std::vector<double>& history);

// ---- solver studies (rank / truncation) --------------------------------

struct StudyRecord {
    std::size_t sample = 0;
    std::size_t d = 0;
    std::size_t b = 0;
    double tol = 0.0;
    double eps = 0.0;
    double gamma = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::size_t r_max = 0;
    std::size_t r_eff = 0;
    bool converged = false;
    bool stagnated = false;
    double mass = 0.0;
    double wall_ms = 0.0;
};

struct StudyMean {
    std::size_t d = 0;
    std::size_t b = 0;
    double tol = 0.0;
    double eps = 0.0;
    double gamma = 0.0;
    double iterations = 0.0;
    double residual = 0.0;
    double r_max = 0.0;
    double r_eff = 0.0;
    double converged = 0.0;  // fraction
    double stagnated = 0.0;  // fraction
    double wall_ms = 0.0;
};

struct StudyResult {
    std::vector<StudyRecord> records;  // grouped by configuration, ordered by sample
    std::vector<StudyMean> means;      // one per configuration
};

struct StudyConfig {
    std::vector<std::size_t> ds{8};
    std::vector<std::size_t> block_sizes{4};
    std::vector<double> tols{1e-4};
    std::vector<double> epss{1e-8};
    std::uint64_t seed = 0;
    std::size_t samples = 100;
    std::size_t max_iter = 10000;
    std::size_t stagnation_window = 200;
    std::string tree = "canonical";
    bool timing = false;
    std::size_t threads = 1;
};

// ds x block_sizes with tols[0], epss[0]
StudyResult run_rank_study(const StudyConfig& cfg);
// ds x block_sizes x tols x epss
StudyResult run_truncation_study(const StudyConfig& cfg);

std::string rank_study_csv(const StudyResult& r);
std::string truncation_study_csv(const StudyResult& r);
std::string study_json(const StudyResult& r, const std::string& kind);

// ---- singular value study ----------------------------------------------

struct SvStudyConfig {
    std::size_t d = 8;
    std::size_t block_size = 4;
    std::uint64_t seed = 0;
    std::size_t samples = 100;
    std::string tree = "canonical";
    std::size_t threads = 1;
};

struct SvStudyResult {
    DimensionTree tree;
    // vertex id -> arithmetic mean over samples of the k-th singular value
    std::map<std::size_t, std::vector<double>> mean_sigma;
};

SvStudyResult run_sv_study(const SvStudyConfig& cfg);
std::string sv_study_csv(const SvStudyResult& r);
std::string sv_study_json(const SvStudyResult& r);

// ---- convergence study -------------------------------------------------

struct ConvergenceCurve {
    std::size_t sample = 0;
    double gamma = 0.0;
    double bound_rate = 0.0;  // gamma / (1 + gamma)
    double fitted_rate = kNaN;
    double initial_residual = 0.0;
    std::vector<double> residuals;  // entry k-1 belongs to iteration k
};

struct BoxStats {
    double mean = kNaN, q1 = kNaN, median = kNaN, q3 = kNaN, min = kNaN, max = kNaN;
    std::size_t count = 0;
};

BoxStats box_stats(std::vector<double> values);

struct ConvergenceSeries {
    std::size_t d = 0;
    std::size_t b = 0;
    std::vector<ConvergenceCurve> curves;
    std::vector<BoxStats> per_iteration;  // index k-1, over the samples still running
    BoxStats fitted_rate;
    BoxStats bound_rate;
};

struct ConvergenceStudyConfig {
    std::vector<std::size_t> ds{8};
    std::size_t block_size = 4;
    double tol = 1e-4;
    double eps = 1e-8;
    std::uint64_t seed = 0;
    std::size_t samples = 100;
    std::size_t max_iter = 10000;
    std::string tree = "canonical";
    std::size_t threads = 1;
};

std::vector<ConvergenceSeries> run_convergence_study(const ConvergenceStudyConfig& cfg);
std::string convergence_study_csv(const std::vector<ConvergenceSeries>& r);
std::string convergence_study_json(const std::vector<ConvergenceSeries>& r);

}  // namespace sanlr
