#include "sanlr/san_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sanlr/error.hpp"

namespace sanlr {

std::size_t SanModel::term_count() const noexcept {
    std::size_t count = 0;
    for (const auto& t : transitions)
        count += t.size();
    return count;
}

std::size_t SanModel::state_count() const noexcept {
    std::size_t count = 1;
    for (auto n : sizes) {
        if (n != 0 && count > std::numeric_limits<std::size_t>::max() / n)
            return std::numeric_limits<std::size_t>::max();
        count *= n;
    }
    return count;
}

std::vector<std::string> validate_model(const SanModel& m) {
    std::vector<std::string> out;
    auto report = [&out](auto&&... parts) {
        std::ostringstream os;
        (os << ... << parts);
        out.push_back(os.str());
    };

    const auto d = m.dimension();
    if (d == 0) {
        report("model has no automata");
        return out;
    }
    for (std::size_t mu = 0; mu < d; ++mu)
        if (m.sizes[mu] == 0)
            report("automaton ", mu + 1, " has an empty state space");

    if (m.transitions.size() != d)
        report("transition sets given for ", m.transitions.size(), " automata, expected ", d);

    for (std::size_t nu = 0; nu < std::min(d, m.transitions.size()); ++nu) {
        for (const auto& tr : m.transitions[nu]) {
            if (tr.from >= m.sizes[nu] || tr.to >= m.sizes[nu])
                report("automaton ", nu + 1, ": transition (", tr.from, ",", tr.to, ") is out of range");
            if (tr.from >= tr.to)
                report("automaton ", nu + 1, ": transition (", tr.from, ",", tr.to,
                       ") violates the state ordering (requires from < to)");
            if (tr.theta.size() != d) {
                report("automaton ", nu + 1, ": transition (", tr.from, ",", tr.to, ") has ",
                       tr.theta.size(), " parameter vectors, expected ", d);
                continue;
            }
            for (std::size_t mu = 0; mu < d; ++mu) {
                const auto& v = tr.theta[mu];
                if (static_cast<std::size_t>(v.size()) != m.sizes[mu]) {
                    report("automaton ", nu + 1, ": transition (", tr.from, ",", tr.to,
                           ") parameter vector for automaton ", mu + 1, " has length ", v.size(),
                           ", expected ", m.sizes[mu]);
                    continue;
                }
                for (Eigen::Index s = 0; s < v.size(); ++s)
                    if (!std::isfinite(v[s]) || v[s] < 0.0)
                        report("automaton ", nu + 1, ": transition (", tr.from, ",", tr.to,
                               ") parameter for automaton ", mu + 1, " state ", s, " is ", v[s],
                               " (must be finite and nonnegative)");
            }
        }
        for (std::size_t a = 0; a < m.transitions[nu].size(); ++a)
            for (std::size_t b = a + 1; b < m.transitions[nu].size(); ++b)
                if (m.transitions[nu][a].from == m.transitions[nu][b].from &&
                    m.transitions[nu][a].to == m.transitions[nu][b].to)
                    report("automaton ", nu + 1, ": duplicate transition (", m.transitions[nu][a].from,
                           ",", m.transitions[nu][a].to, ")");
    }

    if (m.x0.size() != d) {
        report("initial state has ", m.x0.size(), " components, expected ", d);
    } else {
        for (std::size_t mu = 0; mu < d; ++mu)
            if (m.x0[mu] >= m.sizes[mu])
                report("initial state of automaton ", mu + 1, " is ", m.x0[mu], ", out of range");
    }
    return out;
}

void require_valid(const SanModel& m) {
    const auto violations = validate_model(m);
    if (!violations.empty())
        fail(ErrorCode::InvalidModel, violations.front());
}

void require_valid(const MhnParams& p) {
    if (p.theta.rows() == 0 || p.theta.rows() != p.theta.cols())
        fail(ErrorCode::InvalidParams, "MHN parameter matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < p.theta.rows(); ++i)
        for (Eigen::Index j = 0; j < p.theta.cols(); ++j)
            if (!std::isfinite(p.theta(i, j)) || p.theta(i, j) <= 0.0)
                fail(ErrorCode::InvalidParams, "MHN parameters must be finite and positive");
}

SanModel from_mhn(const MhnParams& p, std::optional<std::vector<std::size_t>> x0) {
    require_valid(p);
    const auto d = p.dimension();

    SanModel m;
    m.sizes.assign(d, 2);
    m.transitions.resize(d);
    for (std::size_t nu = 0; nu < d; ++nu) {
        Transition tr;
        tr.from = 0;
        tr.to = 1;
        tr.theta.resize(d);
        for (std::size_t mu = 0; mu < d; ++mu) {
            const double v = p.theta(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(mu));
            // state 1 of automaton nu never leaves via this transition, so its
            // slot is inert; keep it at 1 so the gamma bound reduces exactly
            tr.theta[mu] = (mu == nu) ? Vector{{v, 1.0}} : Vector{{1.0, v}};
        }
        m.transitions[nu].push_back(std::move(tr));
    }
    m.x0 = x0 ? std::move(*x0) : std::vector<std::size_t>(d, 0);
    require_valid(m);
    return m;
}

CpOperator build_cp_generator(const SanModel& m) {
    require_valid(m);
    const auto d = m.dimension();

    CpOperator q;
    q.dims = m.sizes;
    for (std::size_t nu = 0; nu < d; ++nu) {
        for (const auto& tr : m.transitions[nu]) {
            std::vector<Matrix> term(d);
            for (std::size_t mu = 0; mu < d; ++mu) {
                const auto n = static_cast<Eigen::Index>(m.sizes[mu]);
                if (mu != nu) {
                    term[mu] = tr.theta[mu].asDiagonal();
                } else {
                    term[mu] = Matrix::Zero(n, n);
                    const auto i = static_cast<Eigen::Index>(tr.from);
                    const auto j = static_cast<Eigen::Index>(tr.to);
                    const double baseline = tr.theta[mu][i];
                    term[mu](j, i) = baseline;
                    term[mu](i, i) = -baseline;
                }
            }
            q.terms.push_back(std::move(term));
        }
    }
    if (q.terms.empty()) {
        std::vector<Matrix> zero;
        for (auto n : m.sizes)
            zero.push_back(Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
        q.terms.push_back(std::move(zero));
    }
    return q;
}

CpOperator build_identity(const SanModel& m) {
    require_valid(m);
    CpOperator id;
    id.dims = m.sizes;
    std::vector<Matrix> term;
    for (auto n : m.sizes)
        term.push_back(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    id.terms.push_back(std::move(term));
    return id;
}

CpTensor build_initial(const SanModel& m) {
    require_valid(m);
    CpTensor p0;
    p0.dims = m.sizes;
    std::vector<Vector> term;
    for (std::size_t mu = 0; mu < m.dimension(); ++mu)
        term.push_back(Vector::Unit(static_cast<Eigen::Index>(m.sizes[mu]),
                                    static_cast<Eigen::Index>(m.x0[mu])));
    p0.terms.push_back(std::move(term));
    return p0;
}

CpTensor build_ones(const SanModel& m) {
    require_valid(m);
    CpTensor e;
    e.dims = m.sizes;
    std::vector<Vector> term;
    for (auto n : m.sizes)
        term.push_back(Vector::Ones(static_cast<Eigen::Index>(n)));
    e.terms.push_back(std::move(term));
    return e;
}

double gamma_bound(const SanModel& m) {
    require_valid(m);
    const auto d = m.dimension();
    double gamma = 0.0;
    for (std::size_t nu = 0; nu < d; ++nu) {
        double worst = 0.0;
        for (std::size_t i = 0; i < m.sizes[nu]; ++i) {
            double outflow = 0.0;
            for (const auto& tr : m.transitions[nu]) {
                if (tr.from != i)
                    continue;
                double rate = 1.0;
                for (std::size_t mu = 0; mu < d; ++mu)
                    rate *= tr.theta[mu].maxCoeff();
                outflow += rate;
            }
            worst = std::max(worst, outflow);
        }
        gamma += worst;
    }
    return gamma;
}

double mhn_gamma(const MhnParams& p) {
    require_valid(p);
    double gamma = 0.0;
    for (Eigen::Index nu = 0; nu < p.theta.rows(); ++nu) {
        double prod = 1.0;
        for (Eigen::Index mu = 0; mu < p.theta.cols(); ++mu)
            prod *= std::max(1.0, p.theta(nu, mu));
        gamma += prod;
    }
    return gamma;
}

std::vector<double> generator_diagonal(const SanModel& m, std::size_t max_states) {
    require_valid(m);
    const auto count = m.state_count();
    if (count > max_states)
        fail(ErrorCode::CapExceeded, "state space of " + std::to_string(count) + " states exceeds cap");

    const auto d = m.dimension();
    std::vector<double> diag(count, 0.0);
    std::vector<std::size_t> x(d, 0);
    for (std::size_t flat = 0; flat < count; ++flat) {
        double out = 0.0;
        for (std::size_t nu = 0; nu < d; ++nu)
            for (const auto& tr : m.transitions[nu]) {
                if (tr.from != x[nu])
                    continue;
                double rate = 1.0;
                for (std::size_t mu = 0; mu < d; ++mu)
                    rate *= tr.theta[mu][static_cast<Eigen::Index>(x[mu])];
                out += rate;
            }
        diag[flat] = -out;
        for (std::size_t mu = 0; mu < d && ++x[mu] == m.sizes[mu]; ++mu)
            x[mu] = 0;
    }
    return diag;
}

std::vector<double> diagonal_spectrum(const SanModel& m, std::size_t max_states) {
    auto values = generator_diagonal(m, max_states);
    for (auto& v : values)
        v -= 1.0;
    std::sort(values.begin(), values.end());
    return values;
}

}  // namespace sanlr
