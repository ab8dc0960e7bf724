#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sanlr/cp_format.hpp"
#include "sanlr/dense_oracle.hpp"
#include "sanlr/dimension_tree.hpp"

namespace sanlr {

//
// Hierarchical Tucker tensor on a binary dimension tree.
//
// Every vertex t carries a rank r_t; the root rank is fixed to 1.
//  - leaf t (mode mu):   frame U_t, an n_mu x r_t matrix
//  - internal vertex t:  transfer tensor B_t with children l, r, stored as a
//                        (r_l * r_r) x r_t matrix, row index a + r_l * b
//
// The implicit basis of an internal vertex is
//
//   U_t[(i_l, i_r), k] = sum_{a,b} U_l[i_l, a] U_r[i_r, b] B_t[a + r_l*b, k]
//
// and the represented tensor is the single column of U_root. For d = 1 the
// root is a leaf whose n x 1 frame is the tensor itself.
//
class HtTensor {
public:
    HtTensor() = default;
    HtTensor(DimensionTree tree, std::vector<std::size_t> dims, std::vector<Matrix> frames,
             std::vector<Matrix> transfers);

    const DimensionTree& tree() const noexcept { return tree_; }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t dimension() const noexcept { return dims_.size(); }

    std::size_t rank(std::size_t id) const;
    // ranks of all vertices, indexed by vertex id (root entry is 1)
    std::vector<std::size_t> ranks() const;

    const Matrix& frame(std::size_t id) const { return frames_.at(id); }
    const Matrix& transfer(std::size_t id) const { return transfers_.at(id); }
    Matrix& frame(std::size_t id) { return frames_.at(id); }
    Matrix& transfer(std::size_t id) { return transfers_.at(id); }

    bool compatible(const HtTensor& other) const;

private:
    DimensionTree tree_;
    std::vector<std::size_t> dims_;
    std::vector<Matrix> frames_;     // non-empty at leaves
    std::vector<Matrix> transfers_;  // non-empty at internal vertices
};

HtTensor ht_zero(const DimensionTree& tree, const std::vector<std::size_t>& dims);
HtTensor ht_from_cp(const CpTensor& t, const DimensionTree& tree);

HtTensor ht_add(const HtTensor& a, const HtTensor& b);
// sum_i weights[i] * parts[i] in one pass; ranks add up.
HtTensor ht_sum(std::span<const HtTensor> parts, std::span<const double> weights = {});
HtTensor ht_scale(const HtTensor& a, double c);

double ht_inner(const HtTensor& a, const HtTensor& b);
double ht_norm(const HtTensor& a);
double ht_entry(const HtTensor& a, std::span<const std::size_t> index);
DenseTensor ht_to_dense(const HtTensor& a);

HtTensor apply_cp_operator(const CpOperator& op, const HtTensor& v);
// one HT tensor per operator term, ranks unchanged
std::vector<HtTensor> apply_cp_terms(const CpOperator& op, const HtTensor& v);

// Same tensor with orthonormal frames and bases below the root.
HtTensor ht_orthogonalize(const HtTensor& a);

// Singular values of the matricization at every non-root vertex, indexed by
// vertex id (root entry empty), computed from the representation.
std::vector<std::vector<double>> ht_singular_values(const HtTensor& a);

//
// Truncation with relative error control:
//   ||a - trunc(a)|| <= eps_rel * ||a||
// The squared budget eps_rel^2 ||a||^2 is split equally over the 2d-2
// non-root vertices; each vertex keeps the fewest singular values whose
// discarded tail fits its share. Singular values below 1e-14 ||a|| are
// always discarded. Ranks never drop below 1.
//
HtTensor ht_truncate(const HtTensor& a, double eps_rel, std::optional<std::size_t> rank_cap = std::nullopt);

// sum_i w_i parts_i, adding summands in groups whose combined rank stays
// below max(16, 2 * largest summand rank). Every partial sum except the last
// is truncated with eps_inner.
HtTensor ht_sum_grouped(std::span<const HtTensor> parts, std::span<const double> weights, double eps_inner,
                        std::optional<std::size_t> rank_cap = std::nullopt);
// trunc(ht_sum_grouped(parts, weights, eps_rel / #parts)) with eps_rel
HtTensor ht_sum_truncated(std::span<const HtTensor> parts, std::span<const double> weights, double eps_rel,
                          std::optional<std::size_t> rank_cap = std::nullopt);
HtTensor apply_cp_operator_truncated(const CpOperator& op, const HtTensor& v, double eps_rel,
                                     std::optional<std::size_t> rank_cap = std::nullopt);

std::size_t storage_size(const HtTensor& a);
std::size_t max_rank(const HtTensor& a);
std::size_t effective_rank(const HtTensor& a);
// Storage of a representation on `tree` with every rank component equal to r.
std::size_t uniform_storage(const DimensionTree& tree, const std::vector<std::size_t>& dims, std::size_t r);

}  // namespace sanlr
