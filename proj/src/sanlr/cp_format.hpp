#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sanlr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sum of `rank()` outer products; terms[nu][mu] has length dims[mu].
// rank 0 is the zero tensor.
struct CpTensor {
    std::vector<std::size_t> dims;
    std::vector<std::vector<Vector>> terms;

    std::size_t rank() const noexcept { return terms.size(); }
    void check() const;
};

// Sum of Kronecker products of square per-mode matrices;
// terms[nu][mu] is dims[mu] x dims[mu].
struct CpOperator {
    std::vector<std::size_t> dims;
    std::vector<std::vector<Matrix>> terms;

    std::size_t rank() const noexcept { return terms.size(); }
    void check() const;
};

// alpha*a + beta*b as a concatenation of terms (the scalars go into the
// first core of each term).
CpOperator combine(double alpha, const CpOperator& a, double beta, const CpOperator& b);

}  // namespace sanlr
