#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "sanlr/dense_oracle.hpp"
#include "sanlr/dimension_tree.hpp"
#include "sanlr/ht_tensor.hpp"
#include "sanlr/san_model.hpp"

namespace sanlr {

// Snapshot handed to SolverConfig::observer after every iteration.
// `p` is the unnormalized iterate with <e,p> = c, `p_sum` the current
// normalized power P^k p0.
struct IterationState {
    std::size_t k;
    const HtTensor& p;
    const HtTensor& p_sum;
    double c;
    double s;
};

struct SolverConfig {
    double gamma = 0.0;  // <= 0 selects gamma_bound(model)
    double tol = 1e-4;
    double eps_rel = 1e-8;
    std::size_t max_iter = 10000;
    std::optional<std::size_t> rank_cap;
    std::size_t check_every = 1;
    // stop early when the best residual of the last `stagnation_window`
    // iterations is not 1% below the best one before; 0 disables
    std::size_t stagnation_window = 0;
    std::optional<DimensionTree> tree;  // canonical tree when unset
    bool compute_constant = false;      // theorem constant via the dense oracle
    std::function<void(const IterationState&)> observer;
};

struct RankRecord {
    std::size_t max_rank = 0;
    std::size_t effective_rank = 0;
};

struct SolverReport {
    std::size_t iterations = 0;
    double initial_residual = 0.0;
    std::vector<double> residual_history;  // entry k-1 belongs to iterate k; NaN if unchecked
    std::vector<RankRecord> rank_history;
    double gamma = 0.0;
    double theoretical_rate = 0.0;  // gamma / (1 + gamma)
    bool converged = false;
    bool stagnated = false;
    double final_residual = 0.0;
    double max_mass_defect = 0.0;  // max relative |<e,p> - c| over all rescaled iterates
    std::optional<double> constant_c;
};

struct SolverResult {
    HtTensor distribution;  // normalized, <e, distribution> = 1
    SolverReport report;
};

//
// Normalized low-rank uniformization:
//
//   p_sum <- trunc(P p_sum) / <e, .>        P = Id + Q / gamma
//   s     <- s * gamma / (1 + gamma)
//   c     <- c + s
//   p     <- trunc(p + s p_sum) scaled to <e, p> = c
//
// until ||(Id - Q) p / c - p0|| / ||p0|| < tol. Returns p / c. When the
// iteration does not converge the iterate with the smallest residual is
// returned and report.converged is false.
//
SolverResult low_rank_uniformization(const SanModel& m, const SolverConfig& cfg = {});

// ||p - Q p - p0|| / ||p0|| evaluated without truncation.
double relative_residual(const SanModel& m, const HtTensor& p_scaled);

// c * (gamma / (1 + gamma))^k
double convergence_bound(std::size_t k, double gamma, double c);

// ||p0 / (1 + gamma) - p|| + gamma ||p|| for the exact solution p.
double theorem_constant(const DenseTensor& p, const DenseTensor& p0, double gamma);

}  // namespace sanlr
