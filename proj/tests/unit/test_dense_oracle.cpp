#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sanlr/dense_oracle.hpp"
#include "sanlr/error.hpp"

using namespace sanlr;

namespace {

MhnParams mhn1(double lambda) {
    MhnParams p;
    p.theta = Matrix::Constant(1, 1, lambda);
    return p;
}

DenseTensor random_dense(const std::vector<std::size_t>& dims, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    DenseTensor t(dims);
    for (auto& v : t.data) v = g(rng);
    return t;
}

}  // namespace

TEST(DenseGenerator, SingleEventTwoStates) {
    const Matrix q = dense_generator(from_mhn(mhn1(1.0)));
    Matrix expect(2, 2);
    expect << -1, 0, 1, 0;
    EXPECT_LE((q - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DenseGenerator, AllOnesTwoEvents) {
    MhnParams p;
    p.theta = Matrix::Ones(2, 2);
    const Matrix q = dense_generator(from_mhn(p));
    ASSERT_EQ(q.rows(), 4);
    // states (x0,x1): 0=(0,0) 1=(1,0) 2=(0,1) 3=(1,1)
    Matrix expect(4, 4);
    expect << -2, 0, 0, 0,
               1, -1, 0, 0,
               1, 0, -1, 0,
               0, 1, 1, 0;
    EXPECT_LE((q - expect).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE(q.colwise().sum().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DenseGenerator, MatchesPairEnumeration) {
    std::mt19937_64 rng(11);
    for (std::size_t d = 1; d <= 4; ++d) {
        const auto m = from_mhn(oracle::random_mhn(d, rng));
        const Matrix q = dense_generator(m);
        EXPECT_LE((q - oracle::brute_force_generator(m)).cwiseAbs().maxCoeff(), 1e-13) << "d=" << d;
        EXPECT_LE(q.colwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(DenseMarginal, ClosedFormSingleEvent) {
    for (double lambda : {1.0, 3.0, 0.5}) {
        const auto p = dense_marginal(from_mhn(mhn1(lambda)));
        ASSERT_EQ(p.size(), 2u);
        EXPECT_NEAR(p.data[0], 1.0 / (1.0 + lambda), 1e-15);
        EXPECT_NEAR(p.data[1], lambda / (1.0 + lambda), 1e-15);
    }
}

TEST(DenseMarginal, MatchesIndependentSolve) {
    const auto m = from_mhn(oracle::example_matrix_b2());
    const auto p = dense_marginal(m);
    const Vector ref = oracle::marginal(m);
    EXPECT_NEAR(p.sum(), 1.0, 1e-13);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p.data[i], ref(static_cast<Eigen::Index>(i)), 1e-13);
}

TEST(DenseMarginal, CapExceeded) {
    MhnParams p;
    p.theta = Matrix::Ones(6, 6);
    DenseLimits lim;
    lim.max_states = 32;
    try {
        dense_marginal(from_mhn(p), lim);
        FAIL() << "expected CapExceeded";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
    }
}

TEST(Matricize, TwoByTwoTransposePair) {
    DenseTensor t({2, 2}, {1, 2, 3, 4});
    const std::vector<std::size_t> m0{0}, m1{1};
    const Matrix a = matricize(t, m0);
    Matrix expect(2, 2);
    expect << 1, 3, 2, 4;
    EXPECT_EQ(a, expect);
    EXPECT_EQ(matricize(t, m1), Matrix(a.transpose()));
}

TEST(Matricize, FullModeSetIsColumn) {
    DenseTensor t({2, 3, 4});
    const std::vector<std::size_t> all{0, 1, 2};
    const Matrix a = matricize(t, all);
    EXPECT_EQ(a.rows(), 24);
    EXPECT_EQ(a.cols(), 1);
}

TEST(Matricize, ProductTensorHasVanishingMinors) {
    const double u[2] = {1.5, -0.25}, v[2] = {0.75, 2.0}, w[2] = {-1.0, 3.0};
    DenseTensor t({2, 2, 2});
    for (std::size_t f = 0; f < 8; ++f) {
        const auto x = oracle::unflatten(f, t.dims);
        t.data[f] = u[x[0]] * v[x[1]] * w[x[2]];
    }
    const std::vector<std::size_t> m{1};
    const Matrix a = matricize(t, m);
    ASSERT_EQ(a.rows(), 2);
    for (Eigen::Index c1 = 0; c1 < a.cols(); ++c1)
        for (Eigen::Index c2 = c1 + 1; c2 < a.cols(); ++c2)
            EXPECT_NEAR(a(0, c1) * a(1, c2) - a(0, c2) * a(1, c1), 0.0, 1e-14);
}

TEST(Matricize, MatchesLoopAndRoundTrips) {
    std::mt19937_64 rng(3);
    const auto t = random_dense({2, 3, 2, 4}, rng);
    for (const std::vector<std::size_t>& modes :
         {std::vector<std::size_t>{1, 3}, std::vector<std::size_t>{0}, std::vector<std::size_t>{0, 2, 3}}) {
        const Matrix a = matricize(t, modes);
        EXPECT_EQ(a, oracle::matricize(t.data, t.dims, modes));
        const auto back = dematricize(a, t.dims, modes);
        EXPECT_EQ(back.data, t.data);
    }
}

TEST(TreeSingularValues, ProductTensorHasRankOne) {
    DenseTensor t({2, 3, 2, 2});
    for (std::size_t f = 0; f < t.size(); ++f) {
        const auto x = oracle::unflatten(f, t.dims);
        t.data[f] = (1.0 + x[0]) * (2.0 - x[1]) * (0.5 + x[2]) * (3.0 + x[3]);
    }
    const auto tree = canonical_tree(4);
    const auto sv = tree_singular_values(t, tree);
    EXPECT_EQ(sv.size(), tree.size() - 1);
    for (const auto& [id, s] : sv) {
        ASSERT_FALSE(s.empty());
        EXPECT_GT(s[0], 0.0);
        for (std::size_t k = 1; k < s.size(); ++k) EXPECT_EQ(s[k], 0.0) << "vertex " << id;
    }
}

TEST(TreeSingularValues, MatchesDirectSvd) {
    std::mt19937_64 rng(5);
    const auto t = random_dense({2, 3, 2, 3}, rng);
    const auto tree = canonical_tree(4);
    const auto sv = tree_singular_values(t, tree);
    for (const auto& [id, s] : sv) {
        const auto ref = oracle::svd_values(oracle::matricize(t.data, t.dims, tree.vertex(id).modes));
        ASSERT_EQ(s.size(), ref.size());
        for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(s[k], ref[k], 1e-12 * ref[0]);
        for (std::size_t k = 1; k < s.size(); ++k) EXPECT_LE(s[k], s[k - 1]);
    }
    const auto& root = tree.vertex(DimensionTree::root);
    const auto& l = sv.at(static_cast<std::size_t>(root.left));
    const auto& r = sv.at(static_cast<std::size_t>(root.right));
    ASSERT_EQ(l.size(), r.size());
    for (std::size_t k = 0; k < l.size(); ++k) EXPECT_NEAR(l[k], r[k], 1e-12 * l[0]);
}

TEST(CpToDense, MatchesOuterProducts) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    CpTensor t;
    t.dims = {2, 3, 2};
    for (int r = 0; r < 3; ++r) {
        std::vector<Vector> term;
        for (auto n : t.dims) {
            Vector v(static_cast<Eigen::Index>(n));
            for (auto& e : v) e = g(rng);
            term.push_back(v);
        }
        t.terms.push_back(term);
    }
    const auto dense = cp_to_dense(t);
    for (std::size_t f = 0; f < dense.size(); ++f) {
        const auto x = oracle::unflatten(f, t.dims);
        double ref = 0.0;
        for (const auto& term : t.terms) {
            double p = 1.0;
            for (std::size_t mu = 0; mu < 3; ++mu) p *= term[mu](static_cast<Eigen::Index>(x[mu]));
            ref += p;
        }
        EXPECT_NEAR(dense.data[f], ref, 1e-14);
    }
}

TEST(CpOperatorToDense, MatchesElementwiseKronecker) {
    std::mt19937_64 rng(10);
    CpOperator a;
    a.dims = {2, 3};
    for (int r = 0; r < 2; ++r) {
        std::vector<Matrix> term;
        for (auto n : a.dims) term.push_back(Matrix::Random(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
        a.terms.push_back(term);
    }
    const Matrix dense = cp_operator_to_dense(a);
    ASSERT_EQ(dense.rows(), 6);
    for (std::size_t fy = 0; fy < 6; ++fy)
        for (std::size_t fx = 0; fx < 6; ++fx) {
            const auto y = oracle::unflatten(fy, a.dims), x = oracle::unflatten(fx, a.dims);
            double ref = 0.0;
            for (const auto& term : a.terms)
                ref += term[0](static_cast<Eigen::Index>(y[0]), static_cast<Eigen::Index>(x[0])) *
                       term[1](static_cast<Eigen::Index>(y[1]), static_cast<Eigen::Index>(x[1]));
            EXPECT_NEAR(dense(static_cast<Eigen::Index>(fy), static_cast<Eigen::Index>(fx)), ref, 1e-14);
        }
}

TEST(InitialDense, UnitVectorAtStart) {
    MhnParams p;
    p.theta = Matrix::Ones(3, 3);
    const auto m = from_mhn(p, std::vector<std::size_t>{1, 0, 1});
    const auto t = initial_dense(m);
    const std::size_t hot = oracle::flatten({1, 0, 1}, t.dims);
    for (std::size_t f = 0; f < t.size(); ++f) EXPECT_EQ(t.data[f], f == hot ? 1.0 : 0.0);
}
