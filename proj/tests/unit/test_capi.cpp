#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sanlr.h"

namespace {

const double kExample[16] = {1.2688, 1.4585, 1, 1, 0.43529, 1.4311, 1, 1,
                             1, 1, 1.1594, 0.67308, 1, 1, 0.8916, 1.1713};

}  // namespace

TEST(CApi, Metadata) {
    EXPECT_STRNE(sanlr_version(), "");
    EXPECT_STREQ(sanlr_status_string(SANLR_OK), "ok");
    EXPECT_STRNE(sanlr_status_string(SANLR_ERR_PARSE), sanlr_status_string(SANLR_ERR_IO));
}

TEST(CApi, ModelFromMhn) {
    sanlr_model* m = nullptr;
    ASSERT_EQ(sanlr_model_from_mhn(4, kExample, &m), SANLR_OK);
    size_t d = 0, n = 0, nv = 99;
    double gamma = 0;
    EXPECT_EQ(sanlr_model_dimension(m, &d), SANLR_OK);
    EXPECT_EQ(d, 4u);
    EXPECT_EQ(sanlr_model_size(m, 2, &n), SANLR_OK);
    EXPECT_EQ(n, 2u);
    EXPECT_EQ(sanlr_model_size(m, 4, &n), SANLR_ERR_INDEX);
    EXPECT_EQ(sanlr_model_gamma_bound(m, &gamma), SANLR_OK);
    EXPECT_NEAR(gamma, 5.6124, 5e-4);
    EXPECT_EQ(sanlr_model_validate(m, &nv, nullptr, 0), SANLR_OK);
    EXPECT_EQ(nv, 0u);
    sanlr_model_free(m);
}

TEST(CApi, ModelErrors) {
    sanlr_model* m = nullptr;
    const double bad[1] = {-1.0};
    EXPECT_EQ(sanlr_model_from_mhn(1, bad, &m), SANLR_ERR_INVALID_PARAMS);
    EXPECT_EQ(m, nullptr);
    EXPECT_STRNE(sanlr_last_error(), "");
    EXPECT_EQ(sanlr_model_parse_json("{oops", &m), SANLR_ERR_PARSE);
    EXPECT_EQ(sanlr_model_load("/nonexistent/x.json", &m), SANLR_ERR_IO);
    EXPECT_EQ(sanlr_model_from_mhn(1, nullptr, &m), SANLR_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(sanlr_model_dimension(nullptr, nullptr), SANLR_ERR_INVALID_ARGUMENT);
    sanlr_model_free(nullptr);
    sanlr_solution_free(nullptr);
    sanlr_string_free(nullptr);
}

TEST(CApi, ValidateReportsViolations) {
    sanlr_model* m = nullptr;
    const char* json = R"({"kind":"san","sizes":[2],"transitions":[[[1,0]]],"x0":[0]})";
    ASSERT_EQ(sanlr_model_parse_json(json, &m), SANLR_OK);
    size_t nv = 0;
    char buf[16];
    EXPECT_EQ(sanlr_model_validate(m, &nv, buf, sizeof buf), SANLR_OK);
    EXPECT_EQ(nv, 1u);
    EXPECT_EQ(std::strlen(buf), sizeof buf - 1);
    sanlr_solution* s = nullptr;
    EXPECT_EQ(sanlr_solve(m, nullptr, &s), SANLR_ERR_INVALID_MODEL);
    sanlr_model_free(m);
}

TEST(CApi, LoadFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "sanlr_capi_test.csv";
    std::ofstream(path) << "3\n";
    sanlr_model* m = nullptr;
    ASSERT_EQ(sanlr_model_load(path.c_str(), &m), SANLR_OK);
    double g = 0;
    sanlr_model_gamma_bound(m, &g);
    EXPECT_DOUBLE_EQ(g, 3.0);
    sanlr_model_free(m);
    std::filesystem::remove(path);
}

TEST(CApi, SolveSingleEvent) {
    const double lambda = 3.0;
    sanlr_model* m = nullptr;
    ASSERT_EQ(sanlr_model_from_mhn(1, &lambda, &m), SANLR_OK);
    sanlr_solver_options opt;
    sanlr_solver_options_init(&opt);
    EXPECT_EQ(opt.tol, 1e-4);
    opt.tol = 1e-12;
    opt.eps = 0;
    sanlr_solution* s = nullptr;
    ASSERT_EQ(sanlr_solve(m, &opt, &s), SANLR_OK);
    size_t len = 0;
    EXPECT_EQ(sanlr_solution_to_dense(s, nullptr, &len), SANLR_OK);
    ASSERT_EQ(len, 2u);
    std::vector<double> p(2);
    EXPECT_EQ(sanlr_solution_to_dense(s, p.data(), &len), SANLR_OK);
    EXPECT_NEAR(p[0], 0.25, 1e-10);
    EXPECT_NEAR(p[1], 0.75, 1e-10);
    size_t one = 1;
    double v = 0;
    EXPECT_EQ(sanlr_solution_entry(s, &one, &v), SANLR_OK);
    EXPECT_NEAR(v, 0.75, 1e-10);
    size_t bad = 2;
    EXPECT_EQ(sanlr_solution_entry(s, &bad, &v), SANLR_ERR_INDEX);
    size_t small = 1;
    EXPECT_EQ(sanlr_solution_to_dense(s, p.data(), &small), SANLR_ERR_BUFFER_TOO_SMALL);
    sanlr_solution_free(s);
    sanlr_model_free(m);
}

TEST(CApi, SolveAccessors) {
    sanlr_model* m = nullptr;
    ASSERT_EQ(sanlr_model_from_mhn(4, kExample, &m), SANLR_OK);
    sanlr_solution* s = nullptr;
    ASSERT_EQ(sanlr_solve(m, nullptr, &s), SANLR_OK);
    size_t k = 0, rmax = 0, reff = 0, storage = 0;
    double r = 0, g = 0, mass = 0;
    int conv = 0, stag = 1;
    EXPECT_EQ(sanlr_solution_iterations(s, &k), SANLR_OK);
    EXPECT_EQ(sanlr_solution_residual(s, &r), SANLR_OK);
    EXPECT_EQ(sanlr_solution_converged(s, &conv), SANLR_OK);
    EXPECT_EQ(sanlr_solution_stagnated(s, &stag), SANLR_OK);
    EXPECT_EQ(sanlr_solution_gamma(s, &g), SANLR_OK);
    EXPECT_EQ(sanlr_solution_ranks(s, &rmax, &reff), SANLR_OK);
    EXPECT_EQ(sanlr_solution_storage(s, &storage), SANLR_OK);
    EXPECT_EQ(sanlr_solution_mass(s, &mass), SANLR_OK);
    EXPECT_GT(k, 0u);
    EXPECT_LT(r, 1e-4);
    EXPECT_EQ(conv, 1);
    EXPECT_EQ(stag, 0);
    EXPECT_NEAR(g, 5.6124, 5e-4);
    EXPECT_GE(rmax, reff);
    EXPECT_GT(storage, 0u);
    EXPECT_NEAR(mass, 1.0, 1e-12);
    std::vector<double> hist(k + 5, -1.0);
    EXPECT_EQ(sanlr_solution_residual_history(s, hist.data(), hist.size()), SANLR_OK);
    EXPECT_DOUBLE_EQ(hist[k - 1], r);
    EXPECT_EQ(hist[k], -1.0);
    sanlr_solution_free(s);
    sanlr_model_free(m);
}

TEST(CApi, NotConvergedStillReturnsSolution) {
    sanlr_model* m = nullptr;
    ASSERT_EQ(sanlr_model_from_mhn(4, kExample, &m), SANLR_OK);
    sanlr_solver_options opt;
    sanlr_solver_options_init(&opt);
    opt.max_iter = 3;
    sanlr_solution* s = nullptr;
    EXPECT_EQ(sanlr_solve(m, &opt, &s), SANLR_ERR_NOT_CONVERGED);
    ASSERT_NE(s, nullptr);
    int conv = 1;
    sanlr_solution_converged(s, &conv);
    EXPECT_EQ(conv, 0);
    sanlr_solution_free(s);
    opt.max_iter = 100;
    opt.gamma = 1.0;
    s = nullptr;
    EXPECT_EQ(sanlr_solve(m, &opt, &s), SANLR_ERR_INVALID_GAMMA);
    EXPECT_EQ(s, nullptr);
    opt.gamma = 0;
    opt.tree = "perm:1,1,2,3";
    EXPECT_EQ(sanlr_solve(m, &opt, &s), SANLR_ERR_TREE);
    sanlr_model_free(m);
}

TEST(CApi, Studies) {
    sanlr_study_options opt;
    sanlr_study_options_init(&opt);
    EXPECT_EQ(opt.samples, 100u);
    const size_t ds[] = {4};
    const size_t bs[] = {2};
    opt.ds = ds;
    opt.n_ds = 1;
    opt.block_sizes = bs;
    opt.n_block_sizes = 1;
    opt.samples = 2;
    for (auto kind : {SANLR_STUDY_SV, SANLR_STUDY_RANK, SANLR_STUDY_TRUNC, SANLR_STUDY_CONV}) {
        char* out = nullptr;
        ASSERT_EQ(sanlr_run_study(kind, &opt, SANLR_FORMAT_CSV, &out), SANLR_OK) << sanlr_last_error();
        EXPECT_EQ(std::string(out).rfind("# sanlr ", 0), 0u);
        sanlr_string_free(out);
        ASSERT_EQ(sanlr_run_study(kind, &opt, SANLR_FORMAT_JSON, &out), SANLR_OK);
        EXPECT_EQ(out[0], '{');
        sanlr_string_free(out);
    }
    opt.samples = 0;
    char* out = nullptr;
    EXPECT_EQ(sanlr_run_study(SANLR_STUDY_RANK, &opt, SANLR_FORMAT_CSV, &out), SANLR_ERR_INVALID_CONFIG);
}
