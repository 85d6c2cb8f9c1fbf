// Copyright 2026 The mdinew Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MDINEW_RNG_H
#define MDINEW_RNG_H

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mdinew {

/// Seeded random stream. Substreams for parallel trials are derived by hashing
/// (master seed, index path), so a given trial always sees the same numbers
/// regardless of which other trials ran.
class Rng {
   public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed);

    static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

    static constexpr result_type min() {
        return std::mt19937_64::min();
    }
    static constexpr result_type max() {
        return std::mt19937_64::max();
    }
    result_type operator()() {
        return engine_();
    }

    double uniform();  // [0, 1)
    double uniform(double lo, double hi);
    double normal();
    std::uint64_t uniform_int(std::uint64_t n);  // [0, n)

    std::mt19937_64 &engine() {
        return engine_;
    }

   private:
    std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace mdinew

#endif
