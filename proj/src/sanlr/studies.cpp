#include "sanlr/studies.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "sanlr/dense_oracle.hpp"
#include "sanlr/error.hpp"
#include "sanlr/ht_tensor.hpp"
#include "sanlr/sampling.hpp"
#include "sanlr/solver.hpp"

namespace sanlr {

namespace {

using nlohmann::json;

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const auto i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

std::string num(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json num_json(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

void check_common(std::size_t samples, const std::vector<std::size_t>& ds) {
    if (samples == 0)
        fail(ErrorCode::InvalidConfig, "need at least one sample");
    if (ds.empty())
        fail(ErrorCode::InvalidConfig, "need at least one d");
    for (auto d : ds)
        if (d == 0)
            fail(ErrorCode::InvalidConfig, "d must be >= 1");
}

struct GridPoint {
    std::size_t d, b;
    double tol, eps;
};

StudyResult run_grid(const StudyConfig& cfg, const std::vector<GridPoint>& grid) {
    check_common(cfg.samples, cfg.ds);
    StudyResult out;
    for (const auto& g : grid) {
        if (!(g.tol > 0.0) || !(g.eps >= 0.0))
            fail(ErrorCode::InvalidConfig, "tol must be > 0 and eps >= 0");
        const auto tree = parse_tree_spec(cfg.tree, g.d);
        BlockSamplerConfig sc{g.d, g.b, cfg.seed, cfg.samples};
        std::vector<StudyRecord> recs(cfg.samples);
        parallel_for(cfg.samples, cfg.threads, [&](std::size_t s) {
            const auto model = from_mhn(sample_block_parameters(sc, s));
            SolverConfig scfg;
            scfg.tol = g.tol;
            scfg.eps_rel = g.eps;
            scfg.max_iter = cfg.max_iter;
            scfg.stagnation_window = cfg.stagnation_window;
            scfg.tree = tree;
            const auto t0 = std::chrono::steady_clock::now();
            const auto res = low_rank_uniformization(model, scfg);
            const auto t1 = std::chrono::steady_clock::now();

            StudyRecord& r = recs[s];
            r.sample = s;
            r.d = g.d;
            r.b = g.b;
            r.tol = g.tol;
            r.eps = g.eps;
            r.gamma = res.report.gamma;
            r.iterations = res.report.iterations;
            r.residual = res.report.final_residual;
            r.r_max = max_rank(res.distribution);
            r.r_eff = effective_rank(res.distribution);
            r.converged = res.report.converged;
            r.stagnated = res.report.stagnated;
            r.mass = ht_inner(res.distribution, ht_from_cp(build_ones(model), tree));
            r.wall_ms = cfg.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
        });

        StudyMean m;
        m.d = g.d;
        m.b = g.b;
        m.tol = g.tol;
        m.eps = g.eps;
        for (const auto& r : recs) {
            m.gamma += r.gamma;
            m.iterations += static_cast<double>(r.iterations);
            m.residual += r.residual;
            m.r_max += static_cast<double>(r.r_max);
            m.r_eff += static_cast<double>(r.r_eff);
            m.converged += r.converged ? 1.0 : 0.0;
            m.stagnated += r.stagnated ? 1.0 : 0.0;
            m.wall_ms += r.wall_ms;
        }
        const auto n = static_cast<double>(recs.size());
        for (double* f : {&m.gamma, &m.iterations, &m.residual, &m.r_max, &m.r_eff, &m.converged, &m.stagnated,
                          &m.wall_ms})
            *f /= n;
        out.means.push_back(m);
        out.records.insert(out.records.end(), recs.begin(), recs.end());
    }
    return out;
}

std::vector<GridPoint> make_grid(const StudyConfig& cfg, bool full) {
    if (cfg.block_sizes.empty() || cfg.tols.empty() || cfg.epss.empty())
        fail(ErrorCode::InvalidConfig, "block size, tol and eps lists must not be empty");
    std::vector<GridPoint> grid;
    const std::size_t nt = full ? cfg.tols.size() : 1;
    const std::size_t ne = full ? cfg.epss.size() : 1;
    for (auto d : cfg.ds)
        for (auto b : cfg.block_sizes)
            for (std::size_t i = 0; i < nt; ++i)
                for (std::size_t j = 0; j < ne; ++j)
                    grid.push_back({d, resolve_block_size(d, b), cfg.tols[i], cfg.epss[j]});
    return grid;
}

}  // namespace

std::size_t resolve_block_size(std::size_t d, std::size_t b) {
    return b == 0 ? std::max<std::size_t>(1, d / 2) : b;
}

double fit_asymptotic_rate(const std::vector<double>& history) {
    std::vector<double> h;
    for (double v : history)
        if (std::isfinite(v) && v > 0.0)
            h.push_back(v);
    if (h.size() < 2)
        return kNaN;
    const auto last = h.size() - 1;
    const auto mid = h.size() / 2 == last ? last - 1 : h.size() / 2;
    return std::pow(h[last] / h[mid], 1.0 / static_cast<double>(last - mid));
}

StudyResult run_rank_study(const StudyConfig& cfg) {
    return run_grid(cfg, make_grid(cfg, false));
}

StudyResult run_truncation_study(const StudyConfig& cfg) {
    return run_grid(cfg, make_grid(cfg, true));
}

std::string rank_study_csv(const StudyResult& r) {
    std::string s = "# sanlr rank-study v1\nsample,d,b,gamma,iters,residual,r_max,r_eff,wall_ms\n";
    for (const auto& x : r.records)
        s += std::to_string(x.sample) + "," + std::to_string(x.d) + "," + std::to_string(x.b) + "," + num(x.gamma) +
             "," + std::to_string(x.iterations) + "," + num(x.residual) + "," + std::to_string(x.r_max) + "," +
             std::to_string(x.r_eff) + "," + num(x.wall_ms) + "\n";
    for (const auto& m : r.means)
        s += "mean," + std::to_string(m.d) + "," + std::to_string(m.b) + "," + num(m.gamma) + "," +
             num(m.iterations) + "," + num(m.residual) + "," + num(m.r_max) + "," + num(m.r_eff) + "," +
             num(m.wall_ms) + "\n";
    return s;
}

std::string truncation_study_csv(const StudyResult& r) {
    std::string s =
        "# sanlr trunc-study v1\nsample,d,b,tol,eps,gamma,iters,residual,r_max,r_eff,converged,stagnated,wall_ms\n";
    for (const auto& x : r.records)
        s += std::to_string(x.sample) + "," + std::to_string(x.d) + "," + std::to_string(x.b) + "," + num(x.tol) +
             "," + num(x.eps) + "," + num(x.gamma) + "," + std::to_string(x.iterations) + "," + num(x.residual) +
             "," + std::to_string(x.r_max) + "," + std::to_string(x.r_eff) + "," + (x.converged ? "1" : "0") + "," +
             (x.stagnated ? "1" : "0") + "," + num(x.wall_ms) + "\n";
    for (const auto& m : r.means)
        s += "mean," + std::to_string(m.d) + "," + std::to_string(m.b) + "," + num(m.tol) + "," + num(m.eps) + "," +
             num(m.gamma) + "," + num(m.iterations) + "," + num(m.residual) + "," + num(m.r_max) + "," +
             num(m.r_eff) + "," + num(m.converged) + "," + num(m.stagnated) + "," + num(m.wall_ms) + "\n";
    return s;
}

std::string study_json(const StudyResult& r, const std::string& kind) {
    json j;
    j["study"] = kind;
    j["version"] = 1;
    j["records"] = json::array();
    for (const auto& x : r.records)
        j["records"].push_back({{"sample", x.sample},
                                {"d", x.d},
                                {"b", x.b},
                                {"tol", x.tol},
                                {"eps", x.eps},
                                {"gamma", x.gamma},
                                {"iters", x.iterations},
                                {"residual", num_json(x.residual)},
                                {"r_max", x.r_max},
                                {"r_eff", x.r_eff},
                                {"converged", x.converged},
                                {"stagnated", x.stagnated},
                                {"mass", num_json(x.mass)},
                                {"wall_ms", x.wall_ms}});
    j["means"] = json::array();
    for (const auto& m : r.means)
        j["means"].push_back({{"d", m.d},
                              {"b", m.b},
                              {"tol", m.tol},
                              {"eps", m.eps},
                              {"gamma", m.gamma},
                              {"iters", m.iterations},
                              {"residual", num_json(m.residual)},
                              {"r_max", m.r_max},
                              {"r_eff", m.r_eff},
                              {"converged", m.converged},
                              {"stagnated", m.stagnated},
                              {"wall_ms", m.wall_ms}});
    return j.dump(2) + "\n";
}

SvStudyResult run_sv_study(const SvStudyConfig& cfg) {
    check_common(cfg.samples, {cfg.d});
    const auto b = resolve_block_size(cfg.d, cfg.block_size);
    SvStudyResult out{parse_tree_spec(cfg.tree, cfg.d), {}};
    BlockSamplerConfig sc{cfg.d, b, cfg.seed, cfg.samples};

    std::vector<std::map<std::size_t, std::vector<double>>> per_sample(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t s) {
        const auto model = from_mhn(sample_block_parameters(sc, s));
        per_sample[s] = tree_singular_values(dense_marginal(model), out.tree);
    });

    // summed in sample order so the result does not depend on scheduling
    for (const auto& sv : per_sample)
        for (const auto& [id, sig] : sv) {
            auto& acc = out.mean_sigma[id];
            if (acc.size() < sig.size())
                acc.resize(sig.size(), 0.0);
            for (std::size_t k = 0; k < sig.size(); ++k)
                acc[k] += sig[k];
        }
    for (auto& [id, acc] : out.mean_sigma)
        for (auto& v : acc)
            v /= static_cast<double>(cfg.samples);
    return out;
}

std::string sv_study_csv(const SvStudyResult& r) {
    std::string s = "# sanlr sv-study v1\nvertex_id,mode_set,sv_index,mean_sigma\n";
    for (const auto& [id, sig] : r.mean_sigma)
        for (std::size_t k = 0; k < sig.size(); ++k)
            s += std::to_string(id) + ",\"" + r.tree.mode_label(id) + "\"," + std::to_string(k + 1) + "," +
                 num(sig[k]) + "\n";
    return s;
}

std::string sv_study_json(const SvStudyResult& r) {
    json j;
    j["study"] = "sv-study";
    j["version"] = 1;
    j["vertices"] = json::array();
    for (const auto& [id, sig] : r.mean_sigma)
        j["vertices"].push_back({{"vertex_id", id}, {"mode_set", r.tree.mode_label(id)}, {"mean_sigma", sig}});
    return j.dump(2) + "\n";
}

BoxStats box_stats(std::vector<double> v) {
    BoxStats b;
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
    b.count = v.size();
    if (v.empty())
        return b;
    std::sort(v.begin(), v.end());
    // linear interpolation between order statistics
    auto q = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    double sum = 0.0;
    for (double x : v)
        sum += x;
    b.mean = sum / static_cast<double>(v.size());
    b.q1 = q(0.25);
    b.median = q(0.5);
    b.q3 = q(0.75);
    b.min = v.front();
    b.max = v.back();
    return b;
}

std::vector<ConvergenceSeries> run_convergence_study(const ConvergenceStudyConfig& cfg) {
    check_common(cfg.samples, cfg.ds);
    std::vector<ConvergenceSeries> out;
    for (auto d : cfg.ds) {
        ConvergenceSeries series;
        series.d = d;
        series.b = resolve_block_size(d, cfg.block_size);
        const auto tree = parse_tree_spec(cfg.tree, d);
        BlockSamplerConfig sc{d, series.b, cfg.seed, cfg.samples};
        series.curves.resize(cfg.samples);
        parallel_for(cfg.samples, cfg.threads, [&](std::size_t s) {
            const auto model = from_mhn(sample_block_parameters(sc, s));
            SolverConfig scfg;
            scfg.tol = cfg.tol;
            scfg.eps_rel = cfg.eps;
            scfg.max_iter = cfg.max_iter;
            scfg.tree = tree;
            const auto res = low_rank_uniformization(model, scfg);
            auto& c = series.curves[s];
            c.sample = s;
            c.gamma = res.report.gamma;
            c.bound_rate = res.report.theoretical_rate;
            c.initial_residual = res.report.initial_residual;
            c.residuals = res.report.residual_history;
            c.fitted_rate = fit_asymptotic_rate(c.residuals);
        });

        std::size_t longest = 0;
        for (const auto& c : series.curves)
            longest = std::max(longest, c.residuals.size());
        for (std::size_t k = 0; k < longest; ++k) {
            std::vector<double> col;
            for (const auto& c : series.curves)
                if (k < c.residuals.size())
                    col.push_back(c.residuals[k]);
            series.per_iteration.push_back(box_stats(std::move(col)));
        }
        std::vector<double> fitted, bound;
        for (const auto& c : series.curves) {
            fitted.push_back(c.fitted_rate);
            bound.push_back(c.bound_rate);
        }
        series.fitted_rate = box_stats(std::move(fitted));
        series.bound_rate = box_stats(std::move(bound));
        out.push_back(std::move(series));
    }
    return out;
}

std::string convergence_study_csv(const std::vector<ConvergenceSeries>& r) {
    std::string s = "# sanlr conv-study v1\nd,sample,iter,residual\n";
    for (const auto& series : r) {
        const auto d = std::to_string(series.d);
        for (const auto& c : series.curves) {
            s += d + "," + std::to_string(c.sample) + ",0," + num(c.initial_residual) + "\n";
            for (std::size_t k = 0; k < c.residuals.size(); ++k)
                s += d + "," + std::to_string(c.sample) + "," + std::to_string(k + 1) + "," + num(c.residuals[k]) +
                     "\n";
        }
        for (std::size_t k = 0; k < series.per_iteration.size(); ++k) {
            const auto& b = series.per_iteration[k];
            const auto it = std::to_string(k + 1);
            for (const auto& [name, v] : {std::pair{"mean", b.mean}, std::pair{"q1", b.q1},
                                          std::pair{"median", b.median}, std::pair{"q3", b.q3},
                                          std::pair{"min", b.min}, std::pair{"max", b.max}})
                s += d + "," + name + "," + it + "," + num(v) + "\n";
        }
        for (const auto& c : series.curves)
            s += d + "," + std::to_string(c.sample) + ",rate," + num(c.fitted_rate) + "\n";
        const auto& f = series.fitted_rate;
        for (const auto& [name, v] : {std::pair{"mean", f.mean}, std::pair{"q1", f.q1}, std::pair{"median", f.median},
                                      std::pair{"q3", f.q3}, std::pair{"min", f.min}, std::pair{"max", f.max}})
            s += d + "," + name + ",rate," + num(v) + "\n";
        s += d + ",mean,bound," + num(series.bound_rate.mean) + "\n";
    }
    return s;
}

std::string convergence_study_json(const std::vector<ConvergenceSeries>& r) {
    auto stats = [](const BoxStats& b) {
        return json{{"mean", num_json(b.mean)}, {"q1", num_json(b.q1)},   {"median", num_json(b.median)},
                    {"q3", num_json(b.q3)},     {"min", num_json(b.min)}, {"max", num_json(b.max)},
                    {"count", b.count}};
    };
    json j;
    j["study"] = "conv-study";
    j["version"] = 1;
    j["series"] = json::array();
    for (const auto& series : r) {
        json sj{{"d", series.d}, {"b", series.b}};
        sj["curves"] = json::array();
        for (const auto& c : series.curves) {
            json res = json::array();
            for (double v : c.residuals)
                res.push_back(num_json(v));
            sj["curves"].push_back({{"sample", c.sample},
                                    {"gamma", c.gamma},
                                    {"bound_rate", c.bound_rate},
                                    {"fitted_rate", num_json(c.fitted_rate)},
                                    {"initial_residual", c.initial_residual},
                                    {"residuals", res}});
        }
        sj["per_iteration"] = json::array();
        for (const auto& b : series.per_iteration)
            sj["per_iteration"].push_back(stats(b));
        sj["fitted_rate"] = stats(series.fitted_rate);
        sj["bound_rate"] = stats(series.bound_rate);
        j["series"].push_back(std::move(sj));
    }
    return j.dump(2) + "\n";
}

}  // namespace sanlr
