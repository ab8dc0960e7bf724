#include "sanlr/ht_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sanlr/error.hpp"

namespace sanlr {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

std::size_t left_of(const DimensionTree& tree, std::size_t id) {
    return static_cast<std::size_t>(tree.vertex(id).left);
}
std::size_t right_of(const DimensionTree& tree, std::size_t id) {
    return static_cast<std::size_t>(tree.vertex(id).right);
}

// B x_1 M with M of shape p x r_l.
Matrix mode1(const Matrix& b, Index rl, Index rr, const Matrix& m) {
    const Index rt = b.cols();
    Matrix out(m.rows() * rr, rt);
    Eigen::Map<Matrix>(out.data(), m.rows(), rr * rt).noalias() =
        m * Eigen::Map<const Matrix>(b.data(), rl, rr * rt);
    return out;
}

// B x_2 M with M of shape q x r_r.
Matrix mode2(const Matrix& b, Index rl, Index rr, const Matrix& m) {
    const Index rt = b.cols();
    const Index q = m.rows();
    Matrix out(rl * q, rt);
    const Matrix mt = m.transpose();
    for (Index k = 0; k < rt; ++k)
        Eigen::Map<Matrix>(out.col(k).data(), rl, q).noalias() =
            Eigen::Map<const Matrix>(b.col(k).data(), rl, rr) * mt;
    return out;
}

// Thin QR: a = q * r with q orthonormal (rows x k), r (k x cols), k = min.
void thin_qr(const Matrix& a, Matrix& q, Matrix& r) {
    const Index k = std::min(a.rows(), a.cols());
    Eigen::HouseholderQR<Matrix> qr(a);
    q = qr.householderQ() * Matrix::Identity(a.rows(), k);
    r = qr.matrixQR().topRows(k);
    for (Index j = 0; j < r.cols(); ++j)
        for (Index i = j + 1; i < k; ++i)
            r(i, j) = 0.0;
}

// Left singular vectors and singular values of m (descending).
void left_svd(const Matrix& m, Matrix& u, Vector& sigma) {
    if (m.cols() > m.rows()) {
        // m = r^T q^T, so m and r^T share left singular pairs
        Eigen::HouseholderQR<Matrix> qr(m.transpose());
        Matrix rt = qr.matrixQR().topRows(m.rows()).triangularView<Eigen::Upper>();
        rt.transposeInPlace();
        Eigen::BDCSVD<Matrix> svd(rt, Eigen::ComputeFullU);
        u = svd.matrixU();
        sigma = svd.singularValues();
    } else {
        Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
        u = svd.matrixU();
        sigma = svd.singularValues();
    }
}

void require_compatible(const HtTensor& a, const HtTensor& b) {
    if (!a.compatible(b))
        fail(ErrorCode::TreeMismatch, "HT tensors live on different trees or mode sizes");
}

}  // namespace

HtTensor::HtTensor(DimensionTree tree, std::vector<std::size_t> dims, std::vector<Matrix> frames,
                   std::vector<Matrix> transfers)
    : tree_(std::move(tree)), dims_(std::move(dims)), frames_(std::move(frames)),
      transfers_(std::move(transfers)) {
    if (tree_.dimension() != dims_.size() || tree_.size() == 0)
        fail(ErrorCode::TreeMismatch, "tree does not match the number of modes");
    if (frames_.size() != tree_.size() || transfers_.size() != tree_.size())
        fail(ErrorCode::DimMismatch, "need one frame/transfer slot per tree vertex");
    for (std::size_t id = 0; id < tree_.size(); ++id) {
        const auto& v = tree_.vertex(id);
        if (v.is_leaf()) {
            const auto& u = frames_[id];
            if (static_cast<std::size_t>(u.rows()) != dims_[v.leaf_mode()] || u.cols() < 1)
                fail(ErrorCode::DimMismatch, "leaf frame " + std::to_string(id) + " has wrong shape");
        } else {
            const auto rl = rank(static_cast<std::size_t>(v.left));
            const auto rr = rank(static_cast<std::size_t>(v.right));
            const auto& b = transfers_[id];
            if (static_cast<std::size_t>(b.rows()) != rl * rr || b.cols() < 1)
                fail(ErrorCode::DimMismatch, "transfer tensor " + std::to_string(id) + " has wrong shape");
        }
    }
    if (rank(DimensionTree::root) != 1)
        fail(ErrorCode::DimMismatch, "root rank must be 1");
}

std::size_t HtTensor::rank(std::size_t id) const {
    return static_cast<std::size_t>(tree_.vertex(id).is_leaf() ? frames_.at(id).cols()
                                                               : transfers_.at(id).cols());
}

std::vector<std::size_t> HtTensor::ranks() const {
    std::vector<std::size_t> out(tree_.size());
    for (std::size_t id = 0; id < out.size(); ++id)
        out[id] = rank(id);
    return out;
}

bool HtTensor::compatible(const HtTensor& other) const {
    return dims_ == other.dims_ && tree_ == other.tree_;
}

HtTensor ht_zero(const DimensionTree& tree, const std::vector<std::size_t>& dims) {
    if (tree.dimension() != dims.size())
        fail(ErrorCode::TreeMismatch, "tree does not match the number of modes");
    std::vector<Matrix> frames(tree.size()), transfers(tree.size());
    for (std::size_t id = 0; id < tree.size(); ++id) {
        const auto& v = tree.vertex(id);
        if (v.is_leaf())
            frames[id] = Matrix::Zero(idx(dims[v.leaf_mode()]), 1);
        else
            transfers[id] = Matrix::Zero(1, 1);
    }
    return HtTensor(tree, dims, std::move(frames), std::move(transfers));
}

HtTensor ht_from_cp(const CpTensor& t, const DimensionTree& tree) {
    t.check();
    if (tree.dimension() != t.dims.size())
        fail(ErrorCode::DimMismatch, "CP tensor and tree have different dimensions");
    const auto r = t.rank();
    if (r == 0)
        return ht_zero(tree, t.dims);

    std::vector<Matrix> frames(tree.size()), transfers(tree.size());
    for (std::size_t id = 0; id < tree.size(); ++id) {
        const auto& v = tree.vertex(id);
        if (v.is_leaf()) {
            const auto mu = v.leaf_mode();
            Matrix u(idx(t.dims[mu]), idx(r));
            for (std::size_t nu = 0; nu < r; ++nu)
                u.col(idx(nu)) = t.terms[nu][mu];
            if (id == DimensionTree::root)
                u = u.rowwise().sum().eval();
            frames[id] = std::move(u);
        } else {
            const bool is_root = id == DimensionTree::root;
            Matrix b = Matrix::Zero(idx(r * r), is_root ? 1 : idx(r));
            for (std::size_t k = 0; k < r; ++k)
                b(idx(k + r * k), is_root ? 0 : idx(k)) = 1.0;
            transfers[id] = std::move(b);
        }
    }
    return HtTensor(tree, t.dims, std::move(frames), std::move(transfers));
}

HtTensor ht_sum(std::span<const HtTensor> parts, std::span<const double> weights) {
    if (parts.empty())
        fail(ErrorCode::DimMismatch, "cannot sum an empty list of HT tensors");
    if (!weights.empty() && weights.size() != parts.size())
        fail(ErrorCode::DimMismatch, "need one weight per summand");
    for (const auto& p : parts)
        require_compatible(parts.front(), p);

    const auto& tree = parts.front().tree();
    const auto& dims = parts.front().dims();
    auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

    std::vector<Matrix> frames(tree.size()), transfers(tree.size());
    for (std::size_t id = 0; id < tree.size(); ++id) {
        const auto& v = tree.vertex(id);
        const bool is_root = id == DimensionTree::root;
        if (v.is_leaf()) {
            const auto n = idx(dims[v.leaf_mode()]);
            if (is_root) {
                Matrix u = Matrix::Zero(n, 1);
                for (std::size_t i = 0; i < parts.size(); ++i)
                    u += weight(i) * parts[i].frame(id);
                frames[id] = std::move(u);
                continue;
            }
            Index cols = 0;
            for (const auto& p : parts)
                cols += p.frame(id).cols();
            Matrix u(n, cols);
            Index off = 0;
            for (const auto& p : parts) {
                u.middleCols(off, p.frame(id).cols()) = p.frame(id);
                off += p.frame(id).cols();
            }
            frames[id] = std::move(u);
            continue;
        }

        const auto l = static_cast<std::size_t>(v.left);
        const auto r = static_cast<std::size_t>(v.right);
        Index rl = 0, rr = 0, rt = 0;
        for (const auto& p : parts) {
            rl += idx(p.rank(l));
            rr += idx(p.rank(r));
            rt += idx(p.rank(id));
        }
        if (is_root)
            rt = 1;

        Matrix b = Matrix::Zero(rl * rr, rt);
        Index ol = 0, orr = 0, ot = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const auto& p = parts[i];
            const Index pl = idx(p.rank(l)), pr = idx(p.rank(r));
            const auto& src = p.transfer(id);
            const double w = is_root ? weight(i) : 1.0;
            for (Index k = 0; k < src.cols(); ++k)
                for (Index bb = 0; bb < pr; ++bb)
                    for (Index a = 0; a < pl; ++a)
                        b((ol + a) + rl * (orr + bb), is_root ? 0 : ot + k) += w * src(a + pl * bb, k);
            ol += pl;
            orr += pr;
            if (!is_root)
                ot += src.cols();
        }
        transfers[id] = std::move(b);
    }
    return HtTensor(tree, dims, std::move(frames), std::move(transfers));
}

HtTensor ht_add(const HtTensor& a, const HtTensor& b) {
    const HtTensor parts[] = {a, b};
    return ht_sum(parts);
}

HtTensor ht_scale(const HtTensor& a, double c) {
    HtTensor out = a;
    if (a.tree().vertex(DimensionTree::root).is_leaf())
        out.frame(DimensionTree::root) *= c;
    else
        out.transfer(DimensionTree::root) *= c;
    return out;
}

double ht_inner(const HtTensor& a, const HtTensor& b) {
    require_compatible(a, b);
    const auto& tree = a.tree();
    std::vector<Matrix> gram(tree.size());
    for (std::size_t id = tree.size(); id-- > 0;) {
        const auto& v = tree.vertex(id);
        if (v.is_leaf()) {
            gram[id] = a.frame(id).transpose() * b.frame(id);
            continue;
        }
        const auto l = left_of(tree, id), r = right_of(tree, id);
        // Y = (G_l (x) G_r) applied to B_b, then G_t = B_a^T Y
        const Matrix y = mode2(mode1(b.transfer(id), idx(b.rank(l)), idx(b.rank(r)), gram[l]),
                               idx(a.rank(l)), idx(b.rank(r)), gram[r]);
        gram[id] = a.transfer(id).transpose() * y;
        gram[l].resize(0, 0);
        gram[r].resize(0, 0);
    }
    return gram[DimensionTree::root](0, 0);
}

HtTensor ht_orthogonalize(const HtTensor& a) {
    HtTensor out = a;
    const auto& tree = a.tree();
    if (tree.vertex(DimensionTree::root).is_leaf())
        return out;

    std::vector<Matrix> rfac(tree.size());
    for (std::size_t id = tree.size(); id-- > 0;) {
        const auto& v = tree.vertex(id);
        Matrix q, r;
        if (v.is_leaf()) {
            thin_qr(out.frame(id), q, r);
            out.frame(id) = std::move(q);
            rfac[id] = std::move(r);
            continue;
        }
        const auto l = left_of(tree, id), rc = right_of(tree, id);
        // child ranks in `out` are already the reduced ones; B still has the old shape
        const Index old_l = rfac[l].cols(), old_r = rfac[rc].cols();
        Matrix b = mode1(out.transfer(id), old_l, old_r, rfac[l]);
        b = mode2(b, rfac[l].rows(), old_r, rfac[rc]);
        rfac[l].resize(0, 0);
        rfac[rc].resize(0, 0);
        if (id == DimensionTree::root) {
            out.transfer(id) = std::move(b);
        } else {
            thin_qr(b, q, r);
            out.transfer(id) = std::move(q);
            rfac[id] = std::move(r);
        }
    }
    return out;
}

double ht_norm(const HtTensor& a) {
    const auto orth = ht_orthogonalize(a);
    if (a.tree().vertex(DimensionTree::root).is_leaf())
        return orth.frame(DimensionTree::root).norm();
    return orth.transfer(DimensionTree::root).norm();
}

namespace {

struct VertexSpectrum {
    Vector sigma;  // descending
    Matrix basis;  // r_t x len(sigma), left singular vectors in the vertex basis
};

// Spectra of all non-root matricizations of an orthogonalized tensor,
// computed root-to-leaves from square-root factors of the reduced Gramians.
std::vector<VertexSpectrum> vertex_spectra(const HtTensor& orth) {
    const auto& tree = orth.tree();
    std::vector<VertexSpectrum> spec(tree.size());
    std::vector<Matrix> factor(tree.size());

    auto set_child = [&](std::size_t child, Matrix u, Vector s) {
        Index keep = 0;
        while (keep < s.size() && s[keep] > 0.0)
            ++keep;
        factor[child] = u.leftCols(keep) * s.head(keep).asDiagonal();
        spec[child].sigma = std::move(s);
        spec[child].basis = std::move(u);
    };

    for (std::size_t id = 0; id < tree.size(); ++id) {
        const auto& v = tree.vertex(id);
        if (v.is_leaf())
            continue;
        const auto l = left_of(tree, id), r = right_of(tree, id);
        const Index rl = idx(orth.rank(l)), rr = idx(orth.rank(r));
        const Matrix& b = orth.transfer(id);

        Matrix y;  // (rl*rr) x q, B contracted with the Gramian factor of id
        if (id == DimensionTree::root)
            y = b;
        else
            y = b * factor[id];
        factor[id].resize(0, 0);
        const Index q = y.cols();

        Matrix u;
        Vector s;
        left_svd(Eigen::Map<const Matrix>(y.data(), rl, rr * q), u, s);
        set_child(l, std::move(u), std::move(s));

        Matrix right(rr, rl * q);
        for (Index j = 0; j < q; ++j)
            right.middleCols(j * rl, rl) = Eigen::Map<const Matrix>(y.col(j).data(), rl, rr).transpose();
        left_svd(right, u, s);
        set_child(r, std::move(u), std::move(s));
    }
    return spec;
}

std::size_t choose_rank(const Vector& sigma, double budget, std::optional<std::size_t> cap) {
    std::size_t k = static_cast<std::size_t>(sigma.size());
    double tail = 0.0;
    while (k > 1) {
        const double s = sigma[idx(k - 1)];
        if (tail + s * s > budget)
            break;
        tail += s * s;
        --k;
    }
    if (cap)
        k = std::min(k, std::max<std::size_t>(*cap, 1));
    return std::max<std::size_t>(k, 1);
}

}  // namespace

std::vector<std::vector<double>> ht_singular_values(const HtTensor& a) {
    const auto& tree = a.tree();
    std::vector<std::vector<double>> out(tree.size());
    if (tree.vertex(DimensionTree::root).is_leaf())
        return out;
    const auto spec = vertex_spectra(ht_orthogonalize(a));
    for (std::size_t id = 1; id < tree.size(); ++id)
        out[id].assign(spec[id].sigma.data(), spec[id].sigma.data() + spec[id].sigma.size());
    return out;
}

HtTensor ht_truncate(const HtTensor& a, double eps_rel, std::optional<std::size_t> rank_cap) {
    if (!(eps_rel >= 0.0))
        fail(ErrorCode::InvalidConfig, "truncation accuracy must be nonnegative");
    const auto& tree = a.tree();
    if (tree.vertex(DimensionTree::root).is_leaf())
        return a;

    HtTensor orth = ht_orthogonalize(a);
    const double norm = orth.transfer(DimensionTree::root).norm();
    if (norm == 0.0)
        return ht_zero(tree, a.dims());

    const auto spec = vertex_spectra(orth);
    const double edges = static_cast<double>(2 * a.dimension() - 2);
    const double floor_sq = std::pow(1e-14 * norm, 2);
    const double budget = std::max(eps_rel * eps_rel * norm * norm / edges, floor_sq);

    // one basis change per non-root vertex; root children share the same
    // singular values and therefore get the same rank
    std::vector<Matrix> keep(tree.size());
    for (std::size_t id = 1; id < tree.size(); ++id) {
        const auto k = choose_rank(spec[id].sigma, budget, rank_cap);
        keep[id] = spec[id].basis.leftCols(idx(k));
    }

    std::vector<Matrix> frames(tree.size()), transfers(tree.size());
    for (std::size_t id = 0; id < tree.size(); ++id) {
        const auto& v = tree.vertex(id);
        if (v.is_leaf()) {
            frames[id] = orth.frame(id) * keep[id];
            continue;
        }
        const auto l = left_of(tree, id), r = right_of(tree, id);
        const Index rl = keep[l].rows(), rr = keep[r].rows();
        Matrix b = mode1(orth.transfer(id), rl, rr, keep[l].transpose());
        b = mode2(b, keep[l].cols(), rr, keep[r].transpose());
        if (id != DimensionTree::root)
            b = b * keep[id];
        transfers[id] = std::move(b);
    }
    return HtTensor(tree, a.dims(), std::move(frames), std::move(transfers));
}

double ht_entry(const HtTensor& a, std::span<const std::size_t> index) {
    const auto& tree = a.tree();
    if (index.size() != a.dimension())
        fail(ErrorCode::IndexOutOfRange, "multi-index has wrong length");
    for (std::size_t mu = 0; mu < index.size(); ++mu)
        if (index[mu] >= a.dims()[mu])
            fail(ErrorCode::IndexOutOfRange, "multi-index out of range");

    std::vector<Vector> val(tree.size());
    for (std::size_t id = tree.size(); id-- > 0;) {
        const auto& v = tree.vertex(id);
        if (v.is_leaf()) {
            val[id] = a.frame(id).row(idx(index[v.leaf_mode()])).transpose();
            continue;
        }
        const auto& vl = val[left_of(tree, id)];
        const auto& vr = val[right_of(tree, id)];
        Vector w(vl.size() * vr.size());
        for (Index b = 0; b < vr.size(); ++b)
            w.segment(b * vl.size(), vl.size()) = vr[b] * vl;
        val[id] = a.transfer(id).transpose() * w;
    }
    return val[DimensionTree::root][0];
}

DenseTensor ht_to_dense(const HtTensor& a) {
    const auto& tree = a.tree();
    const auto& dims = a.dims();
    DenseTensor out(dims);

    // basis[t]: rows over the modes of t (ascending, first fastest)
    std::vector<Matrix> basis(tree.size());
    auto local_strides = [&](std::size_t id) {
        std::vector<std::size_t> stride(dims.size(), 0);
        std::size_t s = 1;
        for (auto mu : tree.vertex(id).modes) {
            stride[mu] = s;
            s *= dims[mu];
        }
        return stride;
    };
    // row offsets of a child's rows inside its parent's row space
    auto offsets = [&](std::size_t child, const std::vector<std::size_t>& parent_stride) {
        const auto& modes = tree.vertex(child).modes;
        std::size_t rows = 1;
        for (auto mu : modes)
            rows *= dims[mu];
        std::vector<std::size_t> off(rows, 0);
        for (std::size_t row = 0; row < rows; ++row) {
            std::size_t rem = row, o = 0;
            for (auto mu : modes) {
                o += (rem % dims[mu]) * parent_stride[mu];
                rem /= dims[mu];
            }
            off[row] = o;
        }
        return off;
    };

    for (std::size_t id = tree.size(); id-- > 0;) {
        const auto& v = tree.vertex(id);
        if (v.is_leaf()) {
            basis[id] = a.frame(id);
            continue;
        }
        const auto l = left_of(tree, id), r = right_of(tree, id);
        const auto stride = local_strides(id);
        const auto off_l = offsets(l, stride);
        const auto off_r = offsets(r, stride);
        const Matrix& ul = basis[l];
        const Matrix& ur = basis[r];
        const Matrix& b = a.transfer(id);
        Matrix ut(idx(off_l.size() * off_r.size()), b.cols());
        Vector w(ul.cols() * ur.cols());
        for (std::size_t i = 0; i < off_l.size(); ++i)
            for (std::size_t j = 0; j < off_r.size(); ++j) {
                for (Index c = 0; c < ur.cols(); ++c)
                    w.segment(c * ul.cols(), ul.cols()) = ur(idx(j), c) * ul.row(idx(i)).transpose();
                ut.row(idx(off_l[i] + off_r[j])) = (b.transpose() * w).transpose();
            }
        basis[l].resize(0, 0);
        basis[r].resize(0, 0);
        basis[id] = std::move(ut);
    }
    const Matrix& root = basis[DimensionTree::root];
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data[i] = root(idx(i), 0);
    return out;
}

std::vector<HtTensor> apply_cp_terms(const CpOperator& op, const HtTensor& v) {
    op.check();
    if (op.dims != v.dims())
        fail(ErrorCode::DimMismatch, "operator and tensor mode sizes differ");
    const auto& tree = v.tree();
    std::vector<HtTensor> terms;
    terms.reserve(op.rank());
    for (const auto& term : op.terms) {
        HtTensor t = v;
        for (std::size_t id = 0; id < tree.size(); ++id) {
            const auto& vx = tree.vertex(id);
            if (vx.is_leaf())
                t.frame(id) = term[vx.leaf_mode()] * v.frame(id);
        }
        terms.push_back(std::move(t));
    }
    return terms;
}

HtTensor apply_cp_operator(const CpOperator& op, const HtTensor& v) {
    auto terms = apply_cp_terms(op, v);
    if (terms.size() == 1)
        return std::move(terms.front());
    return ht_sum(terms);
}

HtTensor ht_sum_truncated(std::span<const HtTensor> parts, std::span<const double> weights, double eps_rel,
                          std::optional<std::size_t> rank_cap) {
    return ht_truncate(ht_sum_grouped(parts, weights, eps_rel / static_cast<double>(std::max<std::size_t>(parts.size(), 1)), rank_cap),
                       eps_rel, rank_cap);
}

HtTensor ht_sum_grouped(std::span<const HtTensor> parts, std::span<const double> weights, double eps_inner,
                        std::optional<std::size_t> rank_cap) {
    if (parts.empty())
        fail(ErrorCode::DimMismatch, "cannot sum an empty list of HT tensors");
    if (!weights.empty() && weights.size() != parts.size())
        fail(ErrorCode::DimMismatch, "need one weight per summand");

    std::size_t limit = 16;
    for (const auto& p : parts)
        limit = std::max(limit, 2 * max_rank(p));

    std::vector<HtTensor> pending;
    std::vector<double> w;
    std::size_t pending_rank = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto r = max_rank(parts[i]);
        if (!pending.empty() && pending_rank + r > limit) {
            HtTensor acc = ht_truncate(ht_sum(pending, w), eps_inner, rank_cap);
            pending.clear();
            w.clear();
            pending_rank = max_rank(acc);
            pending.push_back(std::move(acc));
            w.push_back(1.0);
        }
        pending.push_back(parts[i]);
        w.push_back(weights.empty() ? 1.0 : weights[i]);
        pending_rank += r;
    }
    return ht_sum(pending, w);
}

HtTensor apply_cp_operator_truncated(const CpOperator& op, const HtTensor& v, double eps_rel,
                                     std::optional<std::size_t> rank_cap) {
    return ht_sum_truncated(apply_cp_terms(op, v), {}, eps_rel, rank_cap);
}

std::size_t storage_size(const HtTensor& a) {
    const auto& tree = a.tree();
    std::size_t total = 0;
    for (std::size_t id = 0; id < tree.size(); ++id) {
        if (tree.vertex(id).is_leaf())
            total += static_cast<std::size_t>(a.frame(id).size());
        else
            total += static_cast<std::size_t>(a.transfer(id).size());
    }
    return total;
}

std::size_t max_rank(const HtTensor& a) {
    std::size_t r = 1;
    for (std::size_t id = 1; id < a.tree().size(); ++id)
        r = std::max(r, a.rank(id));
    return r;
}

std::size_t uniform_storage(const DimensionTree& tree, const std::vector<std::size_t>& dims, std::size_t r) {
    std::size_t total = 0;
    for (std::size_t id = 0; id < tree.size(); ++id) {
        const auto& v = tree.vertex(id);
        const std::size_t rt = id == DimensionTree::root ? 1 : r;
        total += v.is_leaf() ? dims[v.leaf_mode()] * rt : r * r * rt;
    }
    return total;
}

std::size_t effective_rank(const HtTensor& a) {
    const auto target = storage_size(a);
    std::size_t r = 1;
    while (uniform_storage(a.tree(), a.dims(), r) < target)
        ++r;
    return r;
}

}  // namespace sanlr
