#include "sanlr.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "sanlr/error.hpp"
#include "sanlr/model_io.hpp"
#include "sanlr/san_model.hpp"
#include "sanlr/solver.hpp"
#include "sanlr/studies.hpp"

struct sanlr_model {
    sanlr::SanModel model;
};

struct sanlr_solution {
    sanlr::SolverResult result;
    double mass = 0.0;
};

namespace {

thread_local std::string last_error;

sanlr_status map_code(sanlr::ErrorCode c) {
    using sanlr::ErrorCode;
    switch (c) {
    case ErrorCode::InvalidModel: return SANLR_ERR_INVALID_MODEL;
    case ErrorCode::InvalidParams: return SANLR_ERR_INVALID_PARAMS;
    case ErrorCode::InvalidConfig: return SANLR_ERR_INVALID_CONFIG;
    case ErrorCode::CapExceeded: return SANLR_ERR_CAP_EXCEEDED;
    case ErrorCode::SingularSystem: return SANLR_ERR_SINGULAR;
    case ErrorCode::EmptyModeSet: return SANLR_ERR_INVALID_ARGUMENT;
    case ErrorCode::TreeMismatch: return SANLR_ERR_TREE;
    case ErrorCode::InvalidPermutation: return SANLR_ERR_TREE;
    case ErrorCode::DimMismatch: return SANLR_ERR_DIM_MISMATCH;
    case ErrorCode::IndexOutOfRange: return SANLR_ERR_INDEX;
    case ErrorCode::InvalidGamma: return SANLR_ERR_INVALID_GAMMA;
    case ErrorCode::Parse: return SANLR_ERR_PARSE;
    case ErrorCode::Io: return SANLR_ERR_IO;
    }
    return SANLR_ERR_INTERNAL;
}

sanlr_status set_error(sanlr_status s, std::string msg) {
    last_error = std::move(msg);
    return s;
}

template <class F>
sanlr_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const sanlr::Error& e) {
        return set_error(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(SANLR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(SANLR_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(SANLR_ERR_INTERNAL, "unknown error");
    }
}

#define SANLR_REQUIRE(cond)                                                         \
    do {                                                                            \
        if (!(cond))                                                                \
            return set_error(SANLR_ERR_INVALID_ARGUMENT, "invalid argument: " #cond); \
    } while (0)

sanlr_status store_model(sanlr::SanModel m, sanlr_model** out) {
    *out = new sanlr_model{std::move(m)};
    return SANLR_OK;
}

}  // namespace

extern "C" {

const char* sanlr_status_string(sanlr_status s) {
    switch (s) {
    case SANLR_OK: return "ok";
    case SANLR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SANLR_ERR_INVALID_MODEL: return "invalid model";
    case SANLR_ERR_INVALID_PARAMS: return "invalid parameters";
    case SANLR_ERR_INVALID_CONFIG: return "invalid configuration";
    case SANLR_ERR_PARSE: return "parse error";
    case SANLR_ERR_IO: return "i/o error";
    case SANLR_ERR_CAP_EXCEEDED: return "dense size cap exceeded";
    case SANLR_ERR_SINGULAR: return "singular system";
    case SANLR_ERR_INVALID_GAMMA: return "invalid uniformization rate";
    case SANLR_ERR_DIM_MISMATCH: return "dimension mismatch";
    case SANLR_ERR_TREE: return "invalid dimension tree";
    case SANLR_ERR_INDEX: return "index out of range";
    case SANLR_ERR_NOT_CONVERGED: return "not converged";
    case SANLR_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case SANLR_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* sanlr_last_error(void) {
    return last_error.c_str();
}

const char* sanlr_version(void) {
    return "1.0.0";
}

sanlr_status sanlr_model_load(const char* path, sanlr_model** out) {
    SANLR_REQUIRE(path && out);
    return guarded([&] { return store_model(sanlr::load_model_file(path), out); });
}

sanlr_status sanlr_model_parse_json(const char* text, sanlr_model** out) {
    SANLR_REQUIRE(text && out);
    return guarded([&] { return store_model(sanlr::parse_model_json(text), out); });
}

sanlr_status sanlr_model_from_mhn(size_t d, const double* theta, sanlr_model** out) {
    SANLR_REQUIRE(theta && out && d > 0);
    return guarded([&] {
        const auto n = static_cast<Eigen::Index>(d);
        sanlr::MhnParams p{sanlr::Matrix(n, n)};
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                p.theta(i, j) = theta[i * n + j];
        return store_model(sanlr::from_mhn(p), out);
    });
}

void sanlr_model_free(sanlr_model* m) {
    delete m;
}

sanlr_status sanlr_model_dimension(const sanlr_model* m, size_t* d) {
    SANLR_REQUIRE(m && d);
    *d = m->model.dimension();
    return SANLR_OK;
}

sanlr_status sanlr_model_size(const sanlr_model* m, size_t mu, size_t* n) {
    SANLR_REQUIRE(m && n);
    if (mu >= m->model.sizes.size())
        return set_error(SANLR_ERR_INDEX, "automaton index out of range");
    *n = m->model.sizes[mu];
    return SANLR_OK;
}

sanlr_status sanlr_model_gamma_bound(const sanlr_model* m, double* gamma) {
    SANLR_REQUIRE(m && gamma);
    return guarded([&] {
        sanlr::require_valid(m->model);
        *gamma = sanlr::gamma_bound(m->model);
        return SANLR_OK;
    });
}

sanlr_status sanlr_model_validate(const sanlr_model* m, size_t* n_violations, char* buf, size_t buf_size) {
    SANLR_REQUIRE(m && n_violations);
    SANLR_REQUIRE(!buf || buf_size > 0);
    return guarded([&] {
        const auto msgs = sanlr::validate_model(m->model);
        *n_violations = msgs.size();
        if (buf) {
            std::string joined;
            for (const auto& s : msgs)
                joined += s + "\n";
            const auto n = std::min(joined.size(), buf_size - 1);
            std::memcpy(buf, joined.data(), n);
            buf[n] = '\0';
        }
        return SANLR_OK;
    });
}

void sanlr_solver_options_init(sanlr_solver_options* opt) {
    if (!opt)
        return;
    opt->gamma = 0.0;
    opt->tol = 1e-4;
    opt->eps = 1e-8;
    opt->max_iter = 10000;
    opt->rank_cap = 0;
    opt->stagnation_window = 0;
    opt->tree = nullptr;
}

sanlr_status sanlr_solve(const sanlr_model* m, const sanlr_solver_options* opt, sanlr_solution** out) {
    SANLR_REQUIRE(m && out);
    *out = nullptr;
    return guarded([&] {
        sanlr_solver_options o;
        sanlr_solver_options_init(&o);
        if (opt)
            o = *opt;
        sanlr::SolverConfig cfg;
        cfg.gamma = o.gamma;
        cfg.tol = o.tol;
        cfg.eps_rel = o.eps;
        cfg.max_iter = o.max_iter;
        if (o.rank_cap > 0)
            cfg.rank_cap = o.rank_cap;
        cfg.stagnation_window = o.stagnation_window;
        cfg.tree = sanlr::parse_tree_spec(o.tree ? o.tree : "canonical", m->model.dimension());

        auto sol = std::make_unique<sanlr_solution>();
        sol->result = sanlr::low_rank_uniformization(m->model, cfg);
        const auto ones = sanlr::ht_from_cp(sanlr::build_ones(m->model), *cfg.tree);
        sol->mass = sanlr::ht_inner(ones, sol->result.distribution);
        const bool converged = sol->result.report.converged;
        *out = sol.release();
        if (!converged)
            return set_error(SANLR_ERR_NOT_CONVERGED, "residual target not reached");
        return SANLR_OK;
    });
}

void sanlr_solution_free(sanlr_solution* s) {
    delete s;
}

sanlr_status sanlr_solution_iterations(const sanlr_solution* s, size_t* k) {
    SANLR_REQUIRE(s && k);
    *k = s->result.report.iterations;
    return SANLR_OK;
}

sanlr_status sanlr_solution_residual(const sanlr_solution* s, double* r) {
    SANLR_REQUIRE(s && r);
    *r = s->result.report.final_residual;
    return SANLR_OK;
}

sanlr_status sanlr_solution_converged(const sanlr_solution* s, int* converged) {
    SANLR_REQUIRE(s && converged);
    *converged = s->result.report.converged ? 1 : 0;
    return SANLR_OK;
}

sanlr_status sanlr_solution_stagnated(const sanlr_solution* s, int* stagnated) {
    SANLR_REQUIRE(s && stagnated);
    *stagnated = s->result.report.stagnated ? 1 : 0;
    return SANLR_OK;
}

sanlr_status sanlr_solution_gamma(const sanlr_solution* s, double* gamma) {
    SANLR_REQUIRE(s && gamma);
    *gamma = s->result.report.gamma;
    return SANLR_OK;
}

sanlr_status sanlr_solution_ranks(const sanlr_solution* s, size_t* r_max, size_t* r_eff) {
    SANLR_REQUIRE(s && r_max && r_eff);
    *r_max = sanlr::max_rank(s->result.distribution);
    *r_eff = sanlr::effective_rank(s->result.distribution);
    return SANLR_OK;
}

sanlr_status sanlr_solution_storage(const sanlr_solution* s, size_t* entries) {
    SANLR_REQUIRE(s && entries);
    *entries = sanlr::storage_size(s->result.distribution);
    return SANLR_OK;
}

sanlr_status sanlr_solution_mass(const sanlr_solution* s, double* mass) {
    SANLR_REQUIRE(s && mass);
    *mass = s->mass;
    return SANLR_OK;
}

sanlr_status sanlr_solution_entry(const sanlr_solution* s, const size_t* index, double* value) {
    SANLR_REQUIRE(s && index && value);
    return guarded([&] {
        const auto& p = s->result.distribution;
        *value = sanlr::ht_entry(p, std::span<const std::size_t>(index, p.dimension()));
        return SANLR_OK;
    });
}

sanlr_status sanlr_solution_residual_history(const sanlr_solution* s, double* out, size_t len) {
    SANLR_REQUIRE(s && (out || len == 0));
    const auto& h = s->result.report.residual_history;
    for (size_t i = 0; i < len && i < h.size(); ++i)
        out[i] = h[i];
    return SANLR_OK;
}

sanlr_status sanlr_solution_to_dense(const sanlr_solution* s, double* out, size_t* len) {
    SANLR_REQUIRE(s && len);
    return guarded([&] {
        const auto& p = s->result.distribution;
        std::size_t total = 1;
        for (auto n : p.dims()) {
            if (total > (std::size_t{1} << 20) / n)
                return set_error(SANLR_ERR_CAP_EXCEEDED, "full tensor exceeds 2^20 entries");
            total *= n;
        }
        if (!out) {
            *len = total;
            return SANLR_OK;
        }
        if (*len < total) {
            *len = total;
            return set_error(SANLR_ERR_BUFFER_TOO_SMALL, "output buffer too small");
        }
        const auto dense = sanlr::ht_to_dense(p);
        std::memcpy(out, dense.data.data(), total * sizeof(double));
        *len = total;
        return SANLR_OK;
    });
}

void sanlr_study_options_init(sanlr_study_options* opt) {
    if (!opt)
        return;
    *opt = sanlr_study_options{};
    opt->seed = 0;
    opt->samples = 100;
    opt->max_iter = 10000;
    opt->stagnation_window = 200;
    opt->tree = nullptr;
    opt->timing = 0;
    opt->threads = 1;
}

sanlr_status sanlr_run_study(sanlr_study_kind kind, const sanlr_study_options* opt, sanlr_format format,
                             char** out) {
    SANLR_REQUIRE(opt && out);
    SANLR_REQUIRE(format == SANLR_FORMAT_CSV || format == SANLR_FORMAT_JSON);
    SANLR_REQUIRE(!opt->n_ds || opt->ds);
    SANLR_REQUIRE(!opt->n_block_sizes || opt->block_sizes);
    SANLR_REQUIRE(!opt->n_tols || opt->tols);
    SANLR_REQUIRE(!opt->n_epss || opt->epss);
    *out = nullptr;
    return guarded([&] {
        auto list = [](const auto* p, size_t n, auto fallback) {
            using T = std::decay_t<decltype(*p)>;
            return n ? std::vector<T>(p, p + n) : std::vector<T>{fallback};
        };
        const auto ds = list(opt->ds, opt->n_ds, std::size_t{8});
        const auto bs = list(opt->block_sizes, opt->n_block_sizes, std::size_t{4});
        const auto tols = list(opt->tols, opt->n_tols, 1e-4);
        const auto epss = list(opt->epss, opt->n_epss, 1e-8);
        const std::string tree = opt->tree ? opt->tree : "canonical";
        const bool json = format == SANLR_FORMAT_JSON;
        const std::size_t threads = opt->threads ? opt->threads : 1;

        std::string text;
        switch (kind) {
        case SANLR_STUDY_SV: {
            sanlr::SvStudyConfig c;
            c.d = ds.front();
            c.block_size = bs.front();
            c.seed = opt->seed;
            c.samples = opt->samples;
            c.tree = tree;
            c.threads = threads;
            const auto r = sanlr::run_sv_study(c);
            text = json ? sanlr::sv_study_json(r) : sanlr::sv_study_csv(r);
            break;
        }
        case SANLR_STUDY_RANK:
        case SANLR_STUDY_TRUNC: {
            sanlr::StudyConfig c;
            c.ds = ds;
            c.block_sizes = bs;
            c.tols = tols;
            c.epss = epss;
            c.seed = opt->seed;
            c.samples = opt->samples;
            c.max_iter = opt->max_iter;
            c.stagnation_window = opt->stagnation_window;
            c.tree = tree;
            c.timing = opt->timing != 0;
            c.threads = threads;
            if (kind == SANLR_STUDY_RANK) {
                const auto r = sanlr::run_rank_study(c);
                text = json ? sanlr::study_json(r, "rank-study") : sanlr::rank_study_csv(r);
            } else {
                const auto r = sanlr::run_truncation_study(c);
                text = json ? sanlr::study_json(r, "trunc-study") : sanlr::truncation_study_csv(r);
            }
            break;
        }
        case SANLR_STUDY_CONV: {
            sanlr::ConvergenceStudyConfig c;
            c.ds = ds;
            c.block_size = bs.front();
            c.tol = tols.front();
            c.eps = epss.front();
            c.seed = opt->seed;
            c.samples = opt->samples;
            c.max_iter = opt->max_iter;
            c.tree = tree;
            c.threads = threads;
            const auto r = sanlr::run_convergence_study(c);
            text = json ? sanlr::convergence_study_json(r) : sanlr::convergence_study_csv(r);
            break;
        }
        default:
            return set_error(SANLR_ERR_INVALID_ARGUMENT, "unknown study kind");
        }
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
        return SANLR_OK;
    });
}

void sanlr_string_free(char* s) {
    delete[] s;
}

}  // extern "C"
