#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Everything here works on explicit loops over multi-indices and does not call
// into the library's own dense routines.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sanlr/dense_oracle.hpp"
#include "sanlr/dimension_tree.hpp"
#include "sanlr/ht_tensor.hpp"
#include "sanlr/san_model.hpp"

namespace oracle {

using sanlr::Matrix;
using sanlr::Vector;

inline std::size_t product(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (auto v : dims) n *= v;
    return n;
}

// mode-0-fastest
inline std::vector<std::size_t> unflatten(std::size_t flat, const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> x(dims.size());
    for (std::size_t mu = 0; mu < dims.size(); ++mu) {
        x[mu] = flat % dims[mu];
        flat /= dims[mu];
    }
    return x;
}

inline std::size_t flatten(const std::vector<std::size_t>& x, const std::vector<std::size_t>& dims) {
    std::size_t flat = 0;
    for (std::size_t mu = dims.size(); mu-- > 0;) flat = flat * dims[mu] + x[mu];
    return flat;
}

// Published d = 4, b = 2 block example.
inline sanlr::MhnParams example_matrix_b2() {
    sanlr::MhnParams p;
    p.theta.resize(4, 4);
    p.theta << 1.2688, 1.4585, 1, 1,
               0.43529, 1.4311, 1, 1,
               1, 1, 1.1594, 0.67308,
               1, 1, 0.8916, 1.1713;
    return p;
}

inline sanlr::MhnParams random_mhn(std::size_t d, std::mt19937_64& rng, double lo = 0.3, double hi = 2.5) {
    std::uniform_real_distribution<double> u(lo, hi);
    sanlr::MhnParams p;
    p.theta.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < p.theta.rows(); ++i)
        for (Eigen::Index j = 0; j < p.theta.cols(); ++j) p.theta(i, j) = u(rng);
    return p;
}

// Q[y, x] by enumeration of all state pairs: nonzero off the diagonal only
// when x and y differ in exactly one automaton nu and (x[nu], y[nu]) is a
// transition of nu; the rate is the product of the factor vectors at x.
inline Matrix brute_force_generator(const sanlr::SanModel& m) {
    const auto& dims = m.sizes;
    const std::size_t n = product(dims);
    Matrix q = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t fx = 0; fx < n; ++fx) {
        const auto x = unflatten(fx, dims);
        for (std::size_t fy = 0; fy < n; ++fy) {
            if (fy == fx) continue;
            const auto y = unflatten(fy, dims);
            std::size_t diff = 0, nu = 0;
            for (std::size_t mu = 0; mu < dims.size(); ++mu)
                if (x[mu] != y[mu]) {
                    ++diff;
                    nu = mu;
                }
            if (diff != 1) continue;
            for (const auto& tr : m.transitions[nu]) {
                if (tr.from != x[nu] || tr.to != y[nu]) continue;
                double rate = 1.0;
                for (std::size_t mu = 0; mu < dims.size(); ++mu) rate *= tr.theta[mu](static_cast<Eigen::Index>(x[mu]));
                q(static_cast<Eigen::Index>(fy), static_cast<Eigen::Index>(fx)) += rate;
            }
        }
    }
    for (Eigen::Index c = 0; c < q.cols(); ++c) q(c, c) = -q.col(c).sum();
    return q;
}

inline Vector unit_initial(const sanlr::SanModel& m) {
    Vector p0 = Vector::Zero(static_cast<Eigen::Index>(product(m.sizes)));
    p0(static_cast<Eigen::Index>(flatten(m.x0, m.sizes))) = 1.0;
    return p0;
}

// (Id - Q) p = p0 with a full-pivot LU of the brute-force generator.
inline Vector marginal(const sanlr::SanModel& m) {
    const Matrix q = brute_force_generator(m);
    const Matrix a = Matrix::Identity(q.rows(), q.cols()) - q;
    return a.fullPivLu().solve(unit_initial(m));
}

// rows: modes in `modes` (ascending, first fastest), cols: complement
inline Matrix matricize(const std::vector<double>& data, const std::vector<std::size_t>& dims,
                        const std::vector<std::size_t>& modes) {
    std::vector<bool> in(dims.size(), false);
    for (auto mu : modes) in[mu] = true;
    std::size_t rows = 1, cols = 1;
    for (std::size_t mu = 0; mu < dims.size(); ++mu) (in[mu] ? rows : cols) *= dims[mu];
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t f = 0; f < data.size(); ++f) {
        const auto x = unflatten(f, dims);
        std::size_t r = 0, c = 0, sr = 1, sc = 1;
        for (std::size_t mu = 0; mu < dims.size(); ++mu) {
            if (in[mu]) {
                r += x[mu] * sr;
                sr *= dims[mu];
            } else {
                c += x[mu] * sc;
                sc *= dims[mu];
            }
        }
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[f];
    }
    return out;
}

inline std::vector<double> svd_values(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const Vector s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

// Evaluates the HT representation entry by entry from its frames and
// transfer tensors.
inline std::vector<double> ht_dense(const sanlr::HtTensor& a) {
    const auto& tree = a.tree();
    const auto& dims = a.dims();
    const std::size_t n = product(dims);
    std::vector<double> out(n);
    std::function<Vector(std::size_t, const std::vector<std::size_t>&)> basis =
        [&](std::size_t t, const std::vector<std::size_t>& x) -> Vector {
        const auto& v = tree.vertex(t);
        if (v.is_leaf()) return a.frame(t).row(static_cast<Eigen::Index>(x[v.leaf_mode()])).transpose();
        const Vector l = basis(static_cast<std::size_t>(v.left), x);
        const Vector r = basis(static_cast<std::size_t>(v.right), x);
        const Matrix& b = a.transfer(t);
        Vector res = Vector::Zero(b.cols());
        for (Eigen::Index k = 0; k < b.cols(); ++k)
            for (Eigen::Index j = 0; j < r.size(); ++j)
                for (Eigen::Index i = 0; i < l.size(); ++i) res(k) += l(i) * r(j) * b(i + l.size() * j, k);
        return res;
    };
    for (std::size_t f = 0; f < n; ++f) out[f] = basis(sanlr::DimensionTree::root, unflatten(f, dims))(0);
    return out;
}

// Random HT tensor; `rank` gives every non-root vertex the same rank
// unless `ranks` (per vertex id) is given.
inline sanlr::HtTensor random_ht(const sanlr::DimensionTree& tree, const std::vector<std::size_t>& dims,
                                 std::size_t rank, std::mt19937_64& rng,
                                 std::vector<std::size_t> ranks = {}) {
    std::normal_distribution<double> g(0.0, 1.0);
    if (ranks.empty()) ranks.assign(tree.size(), rank);
    ranks[sanlr::DimensionTree::root] = 1;
    std::vector<Matrix> frames(tree.size()), transfers(tree.size());
    for (std::size_t t = 0; t < tree.size(); ++t) {
        const auto& v = tree.vertex(t);
        if (v.is_leaf()) {
            frames[t] = Matrix(static_cast<Eigen::Index>(dims[v.leaf_mode()]), static_cast<Eigen::Index>(ranks[t]));
            for (Eigen::Index i = 0; i < frames[t].size(); ++i) frames[t].data()[i] = g(rng);
        } else {
            const auto rl = ranks[static_cast<std::size_t>(v.left)];
            const auto rr = ranks[static_cast<std::size_t>(v.right)];
            transfers[t] = Matrix(static_cast<Eigen::Index>(rl * rr), static_cast<Eigen::Index>(ranks[t]));
            for (Eigen::Index i = 0; i < transfers[t].size(); ++i) transfers[t].data()[i] = g(rng);
        }
    }
    return sanlr::HtTensor(tree, dims, std::move(frames), std::move(transfers));
}

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double norm(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace oracle
