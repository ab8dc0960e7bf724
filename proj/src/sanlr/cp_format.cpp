#include "sanlr/cp_format.hpp"

#include "sanlr/error.hpp"

namespace sanlr {

void CpTensor::check() const {
    if (dims.empty())
        fail(ErrorCode::DimMismatch, "CP tensor has no modes");
    for (const auto& term : terms) {
        if (term.size() != dims.size())
            fail(ErrorCode::DimMismatch, "CP term does not have one core per mode");
        for (std::size_t mu = 0; mu < dims.size(); ++mu)
            if (static_cast<std::size_t>(term[mu].size()) != dims[mu])
                fail(ErrorCode::DimMismatch, "CP core length does not match mode size");
    }
}

void CpOperator::check() const {
    if (dims.empty())
        fail(ErrorCode::DimMismatch, "CP operator has no modes");
    if (terms.empty())
        fail(ErrorCode::DimMismatch, "CP operator needs at least one term");
    for (const auto& term : terms) {
        if (term.size() != dims.size())
            fail(ErrorCode::DimMismatch, "CP operator term does not have one core per mode");
        for (std::size_t mu = 0; mu < dims.size(); ++mu)
            if (static_cast<std::size_t>(term[mu].rows()) != dims[mu] ||
                static_cast<std::size_t>(term[mu].cols()) != dims[mu])
                fail(ErrorCode::DimMismatch, "CP operator core has wrong shape");
    }
}

CpOperator combine(double alpha, const CpOperator& a, double beta, const CpOperator& b) {
    if (a.dims != b.dims)
        fail(ErrorCode::DimMismatch, "cannot combine CP operators with different mode sizes");
    CpOperator out;
    out.dims = a.dims;
    out.terms.reserve(a.rank() + b.rank());
    for (const auto& t : a.terms) {
        out.terms.push_back(t);
        out.terms.back().front() *= alpha;
    }
    for (const auto& t : b.terms) {
        out.terms.push_back(t);
        out.terms.back().front() *= beta;
    }
    return out;
}

}  // namespace sanlr
