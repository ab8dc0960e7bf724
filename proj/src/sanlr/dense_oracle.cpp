#include "sanlr/dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sanlr/error.hpp"

namespace sanlr {

namespace {

std::size_t checked_product(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (auto k : dims) {
        if (k == 0)
            fail(ErrorCode::DimMismatch, "mode sizes must be positive");
        n *= k;
    }
    return n;
}

std::size_t matrix_states(const SanModel& m, const DenseLimits& limits) {
    require_valid(m);
    const auto states = m.state_count();
    if (states > limits.max_states || states > limits.max_matrix_entries / states)
        fail(ErrorCode::CapExceeded,
             "state space of " + std::to_string(states) + " states is too large for the dense oracle");
    return states;
}

// Kronecker product with `slow` on the outside: (slow ⊗ fast).
Matrix kron(const Matrix& slow, const Matrix& fast) {
    Matrix out(slow.rows() * fast.rows(), slow.cols() * fast.cols());
    for (Eigen::Index i = 0; i < slow.rows(); ++i)
        for (Eigen::Index j = 0; j < slow.cols(); ++j)
            out.block(i * fast.rows(), j * fast.cols(), fast.rows(), fast.cols()) = slow(i, j) * fast;
    return out;
}

std::vector<std::size_t> normalized_modes(std::span<const std::size_t> modes, std::size_t d) {
    if (modes.empty())
        fail(ErrorCode::EmptyModeSet, "matricization needs a non-empty mode set");
    std::vector<std::size_t> sorted(modes.begin(), modes.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= d)
        fail(ErrorCode::DimMismatch, "mode set must hold distinct modes of the tensor");
    return sorted;
}

// Row and column of every flat tensor index under the split modes | rest.
void split_strides(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& modes,
                   std::vector<std::size_t>& row_stride, std::vector<std::size_t>& col_stride,
                   std::size_t& rows, std::size_t& cols) {
    const auto d = dims.size();
    row_stride.assign(d, 0);
    col_stride.assign(d, 0);
    std::vector<bool> in_rows(d, false);
    for (auto m : modes)
        in_rows[m] = true;
    rows = cols = 1;
    for (std::size_t mu = 0; mu < d; ++mu) {
        if (in_rows[mu]) {
            row_stride[mu] = rows;
            rows *= dims[mu];
        } else {
            col_stride[mu] = cols;
            cols *= dims[mu];
        }
    }
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> d) : dims(std::move(d)) {
    if (dims.empty())
        fail(ErrorCode::DimMismatch, "tensor needs at least one mode");
    data.assign(checked_product(dims), 0.0);
}

DenseTensor::DenseTensor(std::vector<std::size_t> d, std::vector<double> values)
    : dims(std::move(d)), data(std::move(values)) {
    if (dims.empty())
        fail(ErrorCode::DimMismatch, "tensor needs at least one mode");
    if (checked_product(dims) != data.size())
        fail(ErrorCode::DimMismatch, "tensor data length does not match its mode sizes");
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> index) const {
    if (index.size() != dims.size())
        fail(ErrorCode::IndexOutOfRange, "multi-index has wrong length");
    std::size_t flat = 0;
    for (std::size_t mu = dims.size(); mu-- > 0;) {
        if (index[mu] >= dims[mu])
            fail(ErrorCode::IndexOutOfRange, "multi-index out of range");
        flat = flat * dims[mu] + index[mu];
    }
    return flat;
}

std::vector<std::size_t> DenseTensor::multi_index(std::size_t flat) const {
    std::vector<std::size_t> index(dims.size());
    for (std::size_t mu = 0; mu < dims.size(); ++mu) {
        index[mu] = flat % dims[mu];
        flat /= dims[mu];
    }
    return index;
}

double DenseTensor::sum() const {
    return std::accumulate(data.begin(), data.end(), 0.0);
}

double DenseTensor::norm() const {
    return Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(data.size())).norm();
}

DenseMatrix dense_generator(const SanModel& m, const DenseLimits& limits) {
    const auto states = matrix_states(m, limits);
    const auto d = m.dimension();
    const auto n = static_cast<Eigen::Index>(states);

    std::vector<std::size_t> stride(d, 1);
    for (std::size_t mu = 1; mu < d; ++mu)
        stride[mu] = stride[mu - 1] * m.sizes[mu - 1];

    DenseMatrix q = DenseMatrix::Zero(n, n);
    std::vector<std::size_t> x(d, 0);
    for (std::size_t from = 0; from < states; ++from) {
        for (std::size_t nu = 0; nu < d; ++nu) {
            for (const auto& tr : m.transitions[nu]) {
                if (tr.from != x[nu])
                    continue;
                double rate = 1.0;
                for (std::size_t mu = 0; mu < d; ++mu)
                    rate *= tr.theta[mu][static_cast<Eigen::Index>(x[mu])];
                const auto to = from + (tr.to - tr.from) * stride[nu];
                q(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) += rate;
            }
        }
        for (std::size_t mu = 0; mu < d && ++x[mu] == m.sizes[mu]; ++mu)
            x[mu] = 0;
    }
    // diagonal closes every column to sum zero
    for (Eigen::Index col = 0; col < n; ++col) {
        q(col, col) = 0.0;
        q(col, col) = -q.col(col).sum();
    }
    return q;
}

DenseTensor initial_dense(const SanModel& m) {
    require_valid(m);
    DenseTensor p0(m.sizes);
    p0.data[p0.flat_index(m.x0)] = 1.0;
    return p0;
}

DenseTensor dense_marginal(const SanModel& m, const DenseLimits& limits) {
    const auto q = dense_generator(m, limits);
    const auto p0 = initial_dense(m);
    const auto n = q.rows();

    const DenseMatrix system = DenseMatrix::Identity(n, n) - q;
    Eigen::PartialPivLU<DenseMatrix> lu(system);
    if (!(lu.rcond() > 1e-14))
        fail(ErrorCode::SingularSystem, "Id - Q is numerically singular");

    const Vector rhs = Eigen::Map<const Vector>(p0.data.data(), n);
    const Vector p = lu.solve(rhs);
    return DenseTensor(m.sizes, std::vector<double>(p.data(), p.data() + n));
}

DenseMatrix matricize(const DenseTensor& t, std::span<const std::size_t> modes) {
    const auto sorted = normalized_modes(modes, t.dimension());
    std::vector<std::size_t> rs, cs;
    std::size_t rows = 0, cols = 0;
    split_strides(t.dims, sorted, rs, cs, rows, cols);

    DenseMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::vector<std::size_t> x(t.dimension(), 0);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        std::size_t r = 0, c = 0;
        for (std::size_t mu = 0; mu < x.size(); ++mu) {
            r += x[mu] * rs[mu];
            c += x[mu] * cs[mu];
        }
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t.data[flat];
        for (std::size_t mu = 0; mu < x.size() && ++x[mu] == t.dims[mu]; ++mu)
            x[mu] = 0;
    }
    return out;
}

DenseTensor dematricize(const DenseMatrix& mat, const std::vector<std::size_t>& dims,
                        std::span<const std::size_t> modes) {
    const auto sorted = normalized_modes(modes, dims.size());
    std::vector<std::size_t> rs, cs;
    std::size_t rows = 0, cols = 0;
    split_strides(dims, sorted, rs, cs, rows, cols);
    if (static_cast<std::size_t>(mat.rows()) != rows || static_cast<std::size_t>(mat.cols()) != cols)
        fail(ErrorCode::DimMismatch, "matrix shape does not match the matricization");

    DenseTensor out(dims);
    std::vector<std::size_t> x(dims.size(), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t r = 0, c = 0;
        for (std::size_t mu = 0; mu < x.size(); ++mu) {
            r += x[mu] * rs[mu];
            c += x[mu] * cs[mu];
        }
        out.data[flat] = mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        for (std::size_t mu = 0; mu < x.size() && ++x[mu] == dims[mu]; ++mu)
            x[mu] = 0;
    }
    return out;
}

std::vector<double> singular_values(const DenseMatrix& mat) {
    if (mat.size() == 0)
        return {};
    Eigen::JacobiSVD<DenseMatrix> svd(mat);
    const Vector& s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    const double cutoff = out.empty() ? 0.0 : 1e-14 * out.front();
    for (auto& v : out)
        if (v < cutoff)
            v = 0.0;
    return out;
}

std::map<std::size_t, std::vector<double>> tree_singular_values(const DenseTensor& t,
                                                                const DimensionTree& tree) {
    if (tree.dimension() != t.dimension())
        fail(ErrorCode::TreeMismatch, "tree leaves do not match the tensor modes");
    std::map<std::size_t, std::vector<double>> out;
    for (std::size_t id = 0; id < tree.size(); ++id) {
        if (id == DimensionTree::root)
            continue;
        out[id] = singular_values(matricize(t, tree.vertex(id).modes));
    }
    return out;
}

DenseTensor cp_to_dense(const CpTensor& t) {
    t.check();
    DenseTensor out(t.dims);
    for (const auto& term : t.terms) {
        Matrix acc = Matrix::Ones(1, 1);
        for (const auto& core : term)
            acc = kron(core, acc);
        for (std::size_t i = 0; i < out.size(); ++i)
            out.data[i] += acc(static_cast<Eigen::Index>(i), 0);
    }
    return out;
}

DenseMatrix cp_operator_to_dense(const CpOperator& a) {
    a.check();
    const auto n = static_cast<Eigen::Index>(checked_product(a.dims));
    DenseMatrix out = DenseMatrix::Zero(n, n);
    for (const auto& term : a.terms) {
        Matrix acc = Matrix::Ones(1, 1);
        for (const auto& core : term)
            acc = kron(core, acc);
        out += acc;
    }
    return out;
}

}  // namespace sanlr
