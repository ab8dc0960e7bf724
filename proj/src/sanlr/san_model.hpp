#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sanlr/cp_format.hpp"

namespace sanlr {

// Local transition from state `from` to state `to` of one automaton nu.
// theta[mu][s] is the multiplicative factor contributed by automaton mu being
// in state s; theta[nu][from] is the baseline rate.
struct Transition {
    std::size_t from = 0;
    std::size_t to = 0;
    std::vector<Vector> theta;
};

//
// Stochastic automata network with only local, functional transitions whose
// rates are separable:
//
//   Q[y,x] = prod_mu theta_{(x[nu],y[nu]), x[mu]}
//
// for x, y differing only in automaton nu with x[nu] < y[nu].
//
struct SanModel {
    std::vector<std::size_t> sizes;
    std::vector<std::vector<Transition>> transitions;  // indexed by nu
    std::vector<std::size_t> x0;

    std::size_t dimension() const noexcept { return sizes.size(); }
    std::size_t term_count() const noexcept;
    // Product of the state-space sizes, saturating at SIZE_MAX.
    std::size_t state_count() const noexcept;
};

// Mutual hazard network parameters; theta(nu, mu) is the effect of event mu
// on event nu, theta(nu, nu) the baseline rate of event nu.
struct MhnParams {
    Matrix theta;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(theta.rows()); }
};

// Every violated model invariant, empty when the model is valid.
std::vector<std::string> validate_model(const SanModel& m);
void require_valid(const SanModel& m);
void require_valid(const MhnParams& p);

// Binary automata, one transition 0 -> 1 per automaton. x0 defaults to the
// all-zeros state.
SanModel from_mhn(const MhnParams& p, std::optional<std::vector<std::size_t>> x0 = std::nullopt);

CpOperator build_cp_generator(const SanModel& m);
CpOperator build_identity(const SanModel& m);
CpTensor build_initial(const SanModel& m);
CpTensor build_ones(const SanModel& m);

// Upper bound on max_x |Q[x,x]| computed from the parameters alone.
double gamma_bound(const SanModel& m);
double mhn_gamma(const MhnParams& p);

// Exact diagonal of Q computed by enumeration (mode-0-fastest state order).
std::vector<double> generator_diagonal(const SanModel& m, std::size_t max_states = std::size_t{1} << 20);

// Spectrum of Q - Id (one value per state, ascending).
std::vector<double> diagonal_spectrum(const SanModel& m, std::size_t max_states = std::size_t{1} << 20);

}  // namespace sanlr
