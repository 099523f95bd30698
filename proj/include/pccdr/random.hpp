#pragma once

#include <cstdint>
#include <random>

namespace pccdr {

/// Root seed of a run. Every stochastic component draws from its own derived stream.
struct RunSeed {
    std::uint64_t value = 0;
};

enum class Stream : std::uint64_t {
    kReferenceSampling = 1,
    kKmeans = 2,
    kInit = 3,
    kPairSampling = 4,
    kDataset = 5,
    kBlobCenters = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent engine for `stream`, optionally further split by `index` (e.g. restart or task id).
std::mt19937_64 make_engine(RunSeed seed, Stream stream, std::uint64_t index = 0);

}  // namespace pccdr
