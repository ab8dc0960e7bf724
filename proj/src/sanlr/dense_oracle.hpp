#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "sanlr/cp_format.hpp"
#include "sanlr/dimension_tree.hpp"
#include "sanlr/san_model.hpp"

namespace sanlr {

//
// Full-storage ground truth for small state spaces. Every tensor here uses
// the mode-0-fastest flat index order:
//
//   flat(i) = i_0 + n_0 * (i_1 + n_1 * (i_2 + ...))
//
// which is also the order of rows/columns of the dense generator.
//

struct DenseLimits {
    std::size_t max_states = std::size_t{1} << 20;          // tensor entries
    std::size_t max_matrix_entries = std::size_t{1} << 24;  // |S|^2 for generator/solve
};

struct DenseTensor {
    std::vector<std::size_t> dims;
    std::vector<double> data;

    DenseTensor() = default;
    explicit DenseTensor(std::vector<std::size_t> dims);
    DenseTensor(std::vector<std::size_t> dims, std::vector<double> data);

    std::size_t dimension() const noexcept { return dims.size(); }
    std::size_t size() const noexcept { return data.size(); }

    std::size_t flat_index(std::span<const std::size_t> index) const;
    std::vector<std::size_t> multi_index(std::size_t flat) const;

    double operator()(std::span<const std::size_t> index) const { return data[flat_index(index)]; }
    double sum() const;
    double norm() const;
};

using DenseMatrix = Matrix;

DenseMatrix dense_generator(const SanModel& m, const DenseLimits& limits = {});
DenseTensor dense_marginal(const SanModel& m, const DenseLimits& limits = {});

// Rows range over the modes in `modes` (ascending, first fastest), columns
// over the complement (ascending, first fastest).
DenseMatrix matricize(const DenseTensor& t, std::span<const std::size_t> modes);
DenseTensor dematricize(const DenseMatrix& mat, const std::vector<std::size_t>& dims,
                        std::span<const std::size_t> modes);

// Descending; values below 1e-14 * sigma_max are reported as exactly 0.
std::vector<double> singular_values(const DenseMatrix& mat);

// Singular values of the matricization at every non-root vertex, keyed by
// vertex id.
std::map<std::size_t, std::vector<double>> tree_singular_values(const DenseTensor& t,
                                                                const DimensionTree& tree);

DenseTensor cp_to_dense(const CpTensor& t);
DenseMatrix cp_operator_to_dense(const CpOperator& a);

DenseTensor initial_dense(const SanModel& m);

}  // namespace sanlr
