#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cbt/offspring.hpp"
#include "cbt/rng.hpp"

namespace cbt {

// Integer jump sequence; every increment is >= -1. A bridge sums to -1.
struct JumpVector {
    std::vector<std::int64_t> inc;

    std::int64_t sum() const {
        std::int64_t s = 0;
        for (auto v : inc) s += v;
        return s;
    }
    bool is_bridge() const { return sum() == -1; }
};

// Retryable failure of the exact rejection sampler.
class BridgeBudgetExhausted : public std::runtime_error {
  public:
    BridgeBudgetExhausted(std::uint64_t tries, std::uint64_t draws)
        : std::runtime_error("bridge rejection budget exhausted after " +
                             std::to_string(tries) + " tries (" +
                             std::to_string(draws) + " draws)"),
          tries_(tries), draws_(draws) {}
    std::uint64_t tries() const { return tries_; }
    std::uint64_t draws() const { return draws_; }

  private:
    std::uint64_t tries_, draws_;
};

struct RejectionReport {
    std::uint64_t tries = 0; // candidate vectors drawn (incl. the accepted one)
    std::uint64_t draws = 0; // elementary offspring draws consumed
};

struct PlantedReport {
    std::uint64_t redraws = 0;          // batches rejected because J < -1
    double balancing_jump = 0.0;        // the inserted jump J
    std::int64_t position_1based = 0;   // where J was planted
};

// First maximal jump removed from the vector.
struct BigJumpSplit {
    std::int64_t v_index_1based = 0;
    std::int64_t max_jump = 0;
    JumpVector rest;
};

JumpVector sample_iid_jumps(const OffspringDistribution& d, std::int64_t n, Rng& rng);

// Exact draw from the law of (X_1..X_n) given W_n = -1, by iid rejection.
// max_elementary_draws is the total draw budget; exhaustion throws
// BridgeBudgetExhausted (retryable, never a silent fallback).
JumpVector sample_bridge_exact(const OffspringDistribution& d, std::int64_t n, Rng& rng,
                               std::uint64_t max_elementary_draws = 1000000000ULL,
                               RejectionReport* report = nullptr);

// Approximate bridge: n-1 iid jumps plus the balancing jump at a uniform
// position, redrawn while the balance would be < -1. Labeled APPROXIMATE in
// all outputs; calibrate against sample_bridge_exact before acceptance use.
JumpVector sample_bridge_planted(const OffspringDistribution& d, std::int64_t n, Rng& rng,
                                 PlantedReport* report = nullptr);

// Cyclic rotation at the first prefix-sum minimum; the unique rotation of a
// bridge that is a Lukasiewicz excursion (strict prefix sums >= 0, total -1).
std::vector<std::int64_t> vervaat(const JumpVector& bridge);

BigJumpSplit big_jump_split(const JumpVector& jumps);

bool is_excursion(std::span<const std::int64_t> inc);

} // namespace cbt
