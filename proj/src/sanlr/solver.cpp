#include "sanlr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sanlr/error.hpp"

namespace sanlr {

namespace {

constexpr std::size_t gamma_check_states = std::size_t{1} << 20;

class ResidualEvaluator {
public:
    // partial sums of the terms of (Id - Q) p are truncated with `inner_eps`
    ResidualEvaluator(const SanModel& m, const DimensionTree& tree, double inner_eps = 0.0)
        : op_(combine(1.0, build_identity(m), -1.0, build_cp_generator(m))),
          p0_(ht_from_cp(build_initial(m), tree)),
          p0_norm_(ht_norm(p0_)),
          inner_eps_(inner_eps) {}

    double operator()(const HtTensor& p_scaled) const {
        auto parts = apply_cp_terms(op_, p_scaled);
        std::vector<double> weights(parts.size(), 1.0);
        parts.insert(parts.begin(), p0_);
        weights.insert(weights.begin(), -1.0);
        return ht_norm(ht_sum_grouped(parts, weights, inner_eps_)) / p0_norm_;
    }

private:
    CpOperator op_;
    HtTensor p0_;
    double p0_norm_;
    double inner_eps_;
};

void check_config(const SolverConfig& cfg) {
    if (!(cfg.tol > 0.0))
        fail(ErrorCode::InvalidConfig, "tol must be positive");
    if (!(cfg.eps_rel >= 0.0))
        fail(ErrorCode::InvalidConfig, "eps_rel must be nonnegative");
    if (cfg.max_iter < 1)
        fail(ErrorCode::InvalidConfig, "max_iter must be at least 1");
    if (cfg.check_every < 1)
        fail(ErrorCode::InvalidConfig, "check_every must be at least 1");
    if (cfg.rank_cap && *cfg.rank_cap < 1)
        fail(ErrorCode::InvalidConfig, "rank cap must be at least 1");
}

}  // namespace

double relative_residual(const SanModel& m, const HtTensor& p_scaled) {
    return ResidualEvaluator(m, p_scaled.tree())(p_scaled);
}

double convergence_bound(std::size_t k, double gamma, double c) {
    return c * std::pow(gamma / (1.0 + gamma), static_cast<double>(k));
}

double theorem_constant(const DenseTensor& p, const DenseTensor& p0, double gamma) {
    if (p.dims != p0.dims)
        fail(ErrorCode::DimMismatch, "solution and initial distribution differ in shape");
    double diff = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double v = p0.data[i] / (1.0 + gamma) - p.data[i];
        diff += v * v;
    }
    return std::sqrt(diff) + gamma * p.norm();
}

SolverResult low_rank_uniformization(const SanModel& m, const SolverConfig& cfg) {
    require_valid(m);
    check_config(cfg);

    const double gamma = cfg.gamma > 0.0 ? cfg.gamma : gamma_bound(m);
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        fail(ErrorCode::InvalidGamma, "gamma must be positive (model without transitions?)");
    if (m.state_count() <= gamma_check_states) {
        const auto diag = generator_diagonal(m, gamma_check_states);
        double worst = 0.0;
        for (double v : diag)
            worst = std::max(worst, std::abs(v));
        if (gamma < worst * (1.0 - 1e-12))
            fail(ErrorCode::InvalidGamma, "gamma " + std::to_string(gamma) +
                                              " is below the largest diagonal magnitude " +
                                              std::to_string(worst));
    }

    const DimensionTree tree = cfg.tree ? *cfg.tree : canonical_tree(m.dimension());
    if (tree.dimension() != m.dimension())
        fail(ErrorCode::TreeMismatch, "tree does not match the number of automata");

    const CpOperator transition = combine(1.0, build_identity(m), 1.0 / gamma, build_cp_generator(m));
    const HtTensor ones = ht_from_cp(build_ones(m), tree);
    const HtTensor p0 = ht_from_cp(build_initial(m), tree);
    // the residual only has to be resolved well below tol
    const auto n_terms = static_cast<double>(m.term_count() + 2);
    const ResidualEvaluator residual(m, tree, 1e-3 * cfg.tol / ((1.0 + gamma) * n_terms));
    auto mass = [&ones](const HtTensor& x) { return ht_inner(ones, x); };

    SolverReport report;
    report.gamma = gamma;
    report.theoretical_rate = gamma / (1.0 + gamma);

    HtTensor p = p0;
    HtTensor p_sum = p0;
    double s = 1.0;
    double c = 1.0;

    report.initial_residual = residual(p);
    report.final_residual = report.initial_residual;
    report.converged = report.initial_residual < cfg.tol;

    HtTensor best = p;
    double best_residual = report.initial_residual;

    std::size_t k = 0;
    while (!report.converged && k < cfg.max_iter) {
        p_sum = apply_cp_operator_truncated(transition, p_sum, cfg.eps_rel, cfg.rank_cap);
        const double sum_mass = mass(p_sum);
        if (!(sum_mass > 0.0) || !std::isfinite(sum_mass)) {
            report.stagnated = true;
            break;
        }
        p_sum = ht_scale(p_sum, 1.0 / sum_mass);

        s *= gamma / (1.0 + gamma);
        c += s;

        {
            const HtTensor parts[] = {p, p_sum};
            const double weights[] = {1.0, s};
            p = ht_truncate(ht_sum(parts, weights), cfg.eps_rel, cfg.rank_cap);
        }
        const double p_mass = mass(p);
        if (!(p_mass > 0.0) || !std::isfinite(p_mass)) {
            report.stagnated = true;
            break;
        }
        p = ht_scale(p, c / p_mass);
        ++k;

        report.max_mass_defect = std::max({report.max_mass_defect, std::abs(mass(p) - c) / c,
                                           std::abs(mass(p_sum) - 1.0)});
        report.rank_history.push_back({max_rank(p), effective_rank(p)});
        if (cfg.observer)
            cfg.observer(IterationState{k, p, p_sum, c, s});

        if (k % cfg.check_every == 0 || k == cfg.max_iter) {
            const HtTensor scaled = ht_scale(p, 1.0 / c);
            const double r = residual(scaled);
            report.residual_history.push_back(r);
            report.final_residual = r;
            if (r < best_residual) {
                best_residual = r;
                best = scaled;
            }
            report.converged = r < cfg.tol;
        } else {
            report.residual_history.push_back(std::numeric_limits<double>::quiet_NaN());
        }

        const auto window = cfg.stagnation_window;
        if (!report.converged && window > 0 && k >= 2 * window) {
            // best of the last window against best before it
            double recent = std::numeric_limits<double>::infinity();
            double before = report.initial_residual;
            for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
                const double r = report.residual_history[i];
                if (std::isnan(r))
                    continue;
                if (i + window >= report.residual_history.size())
                    recent = std::min(recent, r);
                else
                    before = std::min(before, r);
            }
            if (recent >= 0.99 * before) {
                report.stagnated = true;
                break;
            }
        }
    }
    report.iterations = k;

    if (cfg.compute_constant) {
        try {
            const auto exact = dense_marginal(m);
            report.constant_c = theorem_constant(exact, initial_dense(m), gamma);
        } catch (const Error&) {
            // too large for the dense oracle
        }
    }

    if (report.converged)
        return {ht_scale(p, 1.0 / c), std::move(report)};
    report.final_residual = best_residual;
    return {std::move(best), std::move(report)};
}

}  // namespace sanlr
