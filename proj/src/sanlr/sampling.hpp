#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "sanlr/san_model.hpp"

namespace sanlr {

//
// Portable random source: std::mt19937_64 (bit-exact across standard
// libraries) with our own conversions, since the std distributions are
// implementation-defined.
//
//   uniform(): top 53 bits / 2^53, in [0, 1)
//   normal():  Marsaglia polar method, both variates of a pair are used
//
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    double uniform();
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }
    // Normal(mean, stddev) redrawn until the value is > 0.
    double positive_normal(double mean, double stddev);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct BlockSamplerConfig {
    std::size_t d = 0;
    std::size_t block_size = 1;
    std::uint64_t seed = 0;
    std::size_t samples = 1;
};

//
// Block-diagonal MHN parameters. Automata are split into consecutive blocks
// of `block_size` (the last block holds d mod block_size automata when
// block_size does not divide d). Inside a block, entry (i, j) is drawn from
// Normal(1, 2^(-1-|i-j|)) restricted to positive values; all other entries
// are exactly 1. Entries are drawn block by block, row-major inside a block,
// from Rng(seed, sample).
//
MhnParams sample_block_parameters(const BlockSamplerConfig& cfg, std::size_t sample);
std::vector<MhnParams> sample_block_parameters(const BlockSamplerConfig& cfg);

}  // namespace sanlr
