#include "arena/bench.hpp"

#include <chrono>

#include "arena/forward_model.hpp"
#include "arena/rng.hpp"

namespace arena {

BenchResult bench_forward_model(const ModePtr& mode, double seconds, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  Rng rng(seed);
  BenchResult r;
  const auto start = clock::now();
  const auto stop = start + std::chrono::duration<double>(seconds);
  GameState state = initial_state(mode, rng.next());
  for (;;) {
    // Check the clock every 256 calls to keep timing overhead negligible.
    if ((r.calls & 255) == 0 && clock::now() >= stop) break;
    Action action = Action::end_turn();
    if (const auto actor = acting_unit(state)) {
      const auto legal = legal_actions(state, *actor);
      action = legal[rng.index(legal.size())];
    }
    state = advance(state, action);
    ++r.calls;
    if (state.terminal()) {
      ++r.games;
      state = initial_state(mode, rng.next());
    }
  }
  r.seconds = std::chrono::duration<double>(clock::now() - start).count();
  return r;
}

}  // namespace arena
