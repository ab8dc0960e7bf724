#include "sanlr/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "sanlr/error.hpp"

namespace sanlr {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double Rng::positive_normal(double mean, double stddev) {
    for (;;) {
        const double x = normal(mean, stddev);
        if (x > 0.0)
            return x;
    }
}

MhnParams sample_block_parameters(const BlockSamplerConfig& cfg, std::size_t sample) {
    if (cfg.d == 0 || cfg.block_size == 0)
        fail(ErrorCode::InvalidConfig, "block sampler needs d >= 1 and block size >= 1");
    if (sample >= cfg.samples)
        fail(ErrorCode::InvalidConfig, "sample index out of range");

    const auto d = static_cast<Eigen::Index>(cfg.d);
    MhnParams p{Matrix::Ones(d, d)};
    Rng rng(cfg.seed, sample);
    for (std::size_t start = 0; start < cfg.d; start += cfg.block_size) {
        const auto end = std::min(cfg.d, start + cfg.block_size);
        for (auto i = start; i < end; ++i)
            for (auto j = start; j < end; ++j) {
                const auto dist = static_cast<double>(i > j ? i - j : j - i);
                p.theta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    rng.positive_normal(1.0, std::exp2(-1.0 - dist));
            }
    }
    return p;
}

std::vector<MhnParams> sample_block_parameters(const BlockSamplerConfig& cfg) {
    std::vector<MhnParams> out;
    out.reserve(cfg.samples);
    for (std::size_t s = 0; s < cfg.samples; ++s)
        out.push_back(sample_block_parameters(cfg, s));
    return out;
}

}  // namespace sanlr
