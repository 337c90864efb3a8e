#pragma once

#include <cstdint>

#include "arena/game_state.hpp"

namespace arena {

struct BenchResult {
  long calls = 0;  // advance() calls
  long games = 0;  // completed playouts
  double seconds = 0.0;
  double calls_per_second() const { return seconds > 0.0 ? static_cast<double>(calls) / seconds : 0.0; }
};

/// Single-threaded forward-model throughput: plays uniformly random playouts
/// (random legal action of the acting unit, end_turn when none) back to back
/// for `seconds` of wall time.
BenchResult bench_forward_model(const ModePtr& mode, double seconds, std::uint64_t seed);

}  // namespace arena
