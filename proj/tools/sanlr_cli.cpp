// sanlr command line front end, built on the C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sanlr.h"

namespace {

enum Exit { kOk = 0, kError = 1, kInvalid = 2, kNotConverged = 3 };

struct ModelDeleter {
    void operator()(sanlr_model* m) const { sanlr_model_free(m); }
};
struct SolutionDeleter {
    void operator()(sanlr_solution* s) const { sanlr_solution_free(s); }
};
using ModelPtr = std::unique_ptr<sanlr_model, ModelDeleter>;
using SolutionPtr = std::unique_ptr<sanlr_solution, SolutionDeleter>;

int report_failure(sanlr_status s) {
    std::cerr << "error: " << sanlr_status_string(s);
    if (*sanlr_last_error())
        std::cerr << ": " << sanlr_last_error();
    std::cerr << "\n";
    switch (s) {
    case SANLR_ERR_INVALID_MODEL:
    case SANLR_ERR_INVALID_PARAMS:
    case SANLR_ERR_PARSE:
        return kInvalid;
    case SANLR_ERR_NOT_CONVERGED:
        return kNotConverged;
    default:
        return kError;
    }
}

int write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return kError;
    }
    out << text;
    return out ? kOk : kError;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Common {
    std::string out;
    std::string format = "csv";
    std::string tree = "canonical";
};

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
    std::string model;
    double tol = 1e-4;
    double eps = 1e-8;
    double gamma = 0.0;
    std::size_t max_iter = 10000;
    std::size_t rank_cap = 0;
    std::size_t stagnation_window = 0;
    std::string dump_dense;
};

int run_solve(const SolveArgs& a, const Common& c) {
    sanlr_model* raw = nullptr;
    if (auto s = sanlr_model_load(a.model.c_str(), &raw); s != SANLR_OK)
        return report_failure(s);
    ModelPtr model(raw);

    std::size_t violations = 0;
    std::vector<char> msg(4096);
    sanlr_model_validate(model.get(), &violations, msg.data(), msg.size());
    if (violations) {
        std::cerr << "invalid model:\n" << msg.data();
        return kInvalid;
    }

    sanlr_solver_options opt;
    sanlr_solver_options_init(&opt);
    opt.tol = a.tol;
    opt.eps = a.eps;
    opt.gamma = a.gamma;
    opt.max_iter = a.max_iter;
    opt.rank_cap = a.rank_cap;
    opt.stagnation_window = a.stagnation_window;
    opt.tree = c.tree.c_str();

    sanlr_solution* sraw = nullptr;
    const auto status = sanlr_solve(model.get(), &opt, &sraw);
    if (!sraw)
        return report_failure(status);
    SolutionPtr sol(sraw);

    double gamma = 0, residual = 0, mass = 0;
    std::size_t iters = 0, r_max = 0, r_eff = 0, storage = 0;
    int converged = 0, stagnated = 0;
    sanlr_solution_gamma(sol.get(), &gamma);
    sanlr_solution_residual(sol.get(), &residual);
    sanlr_solution_mass(sol.get(), &mass);
    sanlr_solution_iterations(sol.get(), &iters);
    sanlr_solution_ranks(sol.get(), &r_max, &r_eff);
    sanlr_solution_storage(sol.get(), &storage);
    sanlr_solution_converged(sol.get(), &converged);
    sanlr_solution_stagnated(sol.get(), &stagnated);

    std::string text;
    if (c.format == "json") {
        nlohmann::json j{{"gamma", gamma},         {"iterations", iters}, {"residual", residual},
                         {"r_max", r_max},         {"r_eff", r_eff},      {"storage", storage},
                         {"mass", mass},           {"converged", converged != 0},
                         {"stagnated", stagnated != 0}};
        text = j.dump(2) + "\n";
    } else {
        text = "# sanlr solve v1\nkey,value\n";
        text += "gamma," + fmt(gamma) + "\n";
        text += "iterations," + std::to_string(iters) + "\n";
        text += "residual," + fmt(residual) + "\n";
        text += "r_max," + std::to_string(r_max) + "\n";
        text += "r_eff," + std::to_string(r_eff) + "\n";
        text += "storage," + std::to_string(storage) + "\n";
        text += "mass," + fmt(mass) + "\n";
        text += "converged," + std::to_string(converged) + "\n";
        text += "stagnated," + std::to_string(stagnated) + "\n";
    }
    if (int rc = write_output(text, c.out); rc != kOk)
        return rc;

    if (!a.dump_dense.empty()) {
        std::size_t len = 0;
        if (auto s = sanlr_solution_to_dense(sol.get(), nullptr, &len); s != SANLR_OK)
            return report_failure(s);
        std::vector<double> p(len);
        if (auto s = sanlr_solution_to_dense(sol.get(), p.data(), &len); s != SANLR_OK)
            return report_failure(s);
        std::string dense = "# sanlr dense v1\nflat_index,p\n";
        for (std::size_t i = 0; i < len; ++i)
            dense += std::to_string(i) + "," + fmt(p[i]) + "\n";
        if (int rc = write_output(dense, a.dump_dense); rc != kOk)
            return rc;
    }

    if (status == SANLR_ERR_NOT_CONVERGED) {
        std::cerr << "not converged: residual " << fmt(residual) << " after " << iters << " iterations\n";
        return kNotConverged;
    }
    return status == SANLR_OK ? kOk : report_failure(status);
}

// ---- validate --------------------------------------------------------------

int run_validate(const std::string& path) {
    sanlr_model* raw = nullptr;
    if (auto s = sanlr_model_load(path.c_str(), &raw); s != SANLR_OK)
        return report_failure(s);
    ModelPtr model(raw);
    std::size_t violations = 0;
    std::vector<char> msg(1 << 16);
    if (auto s = sanlr_model_validate(model.get(), &violations, msg.data(), msg.size()); s != SANLR_OK)
        return report_failure(s);
    if (violations) {
        std::cout << "invalid: " << violations << " problem(s)\n" << msg.data();
        return kInvalid;
    }
    std::size_t d = 0;
    double gamma = 0.0;
    sanlr_model_dimension(model.get(), &d);
    sanlr_model_gamma_bound(model.get(), &gamma);
    std::cout << "valid: d=" << d << " gamma=" << fmt(gamma) << "\n";
    return kOk;
}

// ---- studies ---------------------------------------------------------------

struct StudyArgs {
    std::vector<std::size_t> ds{8};
    std::vector<std::string> block_sizes{"4"};
    std::vector<double> tols{1e-4};
    std::vector<double> epss{1e-8};
    unsigned long long seed = 0;
    std::size_t samples = 100;
    std::size_t max_iter = 10000;
    std::size_t stagnation_window = 200;
    std::size_t threads = 1;
    bool timing = false;
};

int run_study(sanlr_study_kind kind, const StudyArgs& a, const Common& c) {
    std::vector<std::size_t> bs;
    for (const auto& b : a.block_sizes) {
        if (b == "half") {
            bs.push_back(0);
            continue;
        }
        try {
            std::size_t pos = 0;
            const auto v = std::stoul(b, &pos);
            if (pos != b.size() || v == 0)
                throw std::invalid_argument(b);
            bs.push_back(v);
        } catch (const std::exception&) {
            std::cerr << "error: --block-size expects positive integers or 'half', got '" << b << "'\n";
            return kError;
        }
    }

    sanlr_study_options opt;
    sanlr_study_options_init(&opt);
    opt.ds = a.ds.data();
    opt.n_ds = a.ds.size();
    opt.block_sizes = bs.data();
    opt.n_block_sizes = bs.size();
    opt.tols = a.tols.data();
    opt.n_tols = a.tols.size();
    opt.epss = a.epss.data();
    opt.n_epss = a.epss.size();
    opt.seed = a.seed;
    opt.samples = a.samples;
    opt.max_iter = a.max_iter;
    opt.stagnation_window = a.stagnation_window;
    opt.tree = c.tree.c_str();
    opt.timing = a.timing ? 1 : 0;
    opt.threads = a.threads;

    char* text = nullptr;
    const auto format = c.format == "json" ? SANLR_FORMAT_JSON : SANLR_FORMAT_CSV;
    if (auto s = sanlr_run_study(kind, &opt, format, &text); s != SANLR_OK)
        return report_failure(s);
    const std::string out(text);
    sanlr_string_free(text);
    return write_output(out, c.out);
}

void add_common(CLI::App* app, Common& c, bool with_tree = true) {
    app->add_option("--out", c.out, "Output file (default: stdout)");
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    if (with_tree)
        app->add_option("--tree", c.tree, "Dimension tree: canonical or perm:i1,i2,... (1-based leaf order)");
}

void add_study_options(CLI::App* app, StudyArgs& a, bool tol_eps_lists) {
    app->add_option("--d", a.ds, "Number of automata (comma separated list)")->delimiter(',');
    app->add_option("--block-size", a.block_sizes, "Block size(s); 'half' means d/2")->delimiter(',');
    if (tol_eps_lists) {
        app->add_option("--tol", a.tols, "Residual tolerances (list)")->delimiter(',');
        app->add_option("--eps", a.epss, "Relative truncation accuracies (list)")->delimiter(',');
    } else {
        app->add_option("--tol", a.tols.front(), "Residual tolerance");
        app->add_option("--eps", a.epss.front(), "Relative truncation accuracy");
    }
    app->add_option("--samples", a.samples, "Number of sampled parameter sets");
    app->add_option("--seed", a.seed, "Random seed");
    app->add_option("--max-iter", a.max_iter, "Iteration limit per solve");
    app->add_option("--stagnation-window", a.stagnation_window, "Stop after this many iterations without progress (0: off)");
    app->add_option("--threads", a.threads, "Worker threads for the samples");
    app->add_flag("--timing", a.timing, "Record wall clock times (makes output non-reproducible)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-rank marginals of Stochastic Automata Networks"};
    app.require_subcommand(1);

    Common common;
    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one model and print a summary");
    solve_cmd->add_option("--model", solve.model, "Model file (.json, or .csv with MHN parameters)")->required();
    solve_cmd->add_option("--tol", solve.tol, "Residual tolerance");
    solve_cmd->add_option("--eps", solve.eps, "Relative truncation accuracy");
    solve_cmd->add_option("--gamma", solve.gamma, "Uniformization rate (default: model bound)");
    solve_cmd->add_option("--max-iter", solve.max_iter, "Iteration limit");
    solve_cmd->add_option("--rank-cap", solve.rank_cap, "Rank limit per vertex (0: none)");
    solve_cmd->add_option("--stagnation-window", solve.stagnation_window, "Stop after this many iterations without progress (0: off)");
    solve_cmd->add_option("--dump-dense", solve.dump_dense, "Write the full distribution as CSV");
    add_common(solve_cmd, common);

    std::string validate_model;
    auto* validate_cmd = app.add_subcommand("validate", "Check a model file");
    validate_cmd->add_option("--model", validate_model, "Model file")->required();

    StudyArgs sv, rank, trunc, conv;
    sv.block_sizes = {"4"};
    auto* sv_cmd = app.add_subcommand("sv-study", "Mean singular values per tree vertex (dense solves)");
    sv_cmd->add_option("--d", sv.ds.front(), "Number of automata");
    sv_cmd->add_option("--block-size", sv.block_sizes.front(), "Block size or 'half'");
    sv_cmd->add_option("--samples", sv.samples, "Number of sampled parameter sets");
    sv_cmd->add_option("--seed", sv.seed, "Random seed");
    sv_cmd->add_option("--threads", sv.threads, "Worker threads for the samples");
    add_common(sv_cmd, common);

    auto* rank_cmd = app.add_subcommand("rank-study", "Ranks of the computed distribution versus d");
    add_study_options(rank_cmd, rank, false);
    add_common(rank_cmd, common);

    auto* trunc_cmd = app.add_subcommand("trunc-study", "Ranks and iterations over a tol x eps grid");
    add_study_options(trunc_cmd, trunc, true);
    add_common(trunc_cmd, common);

    auto* conv_cmd = app.add_subcommand("conv-study", "Residual curves and fitted convergence rates");
    add_study_options(conv_cmd, conv, false);
    add_common(conv_cmd, common);

    CLI11_PARSE(app, argc, argv);

    if (*solve_cmd)
        return run_solve(solve, common);
    if (*validate_cmd)
        return run_validate(validate_model);
    if (*sv_cmd)
        return run_study(SANLR_STUDY_SV, sv, common);
    if (*rank_cmd)
        return run_study(SANLR_STUDY_RANK, rank, common);
    if (*trunc_cmd)
        return run_study(SANLR_STUDY_TRUNC, trunc, common);
    if (*conv_cmd)
        return run_study(SANLR_STUDY_CONV, conv, common);
    return kError;
}
