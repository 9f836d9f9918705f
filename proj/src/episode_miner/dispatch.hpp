#pragma once

#include <cstddef>
#include <map>
#include <optional>

namespace epm {

enum class Strategy {
  EpisodeParallel,  // one counter per episode, episodes spread over workers
  SegmentParallel,  // one episode at a time, its stream segments spread over workers
};

const char* to_string(Strategy s);

// Crossover measurements: episode size N -> candidate count above which
// episode-parallel counting wins.
using CrossoverTable = std::map<std::size_t, double>;

// Selector for the hybrid counting strategy:
//   episode-parallel  iff  S > MP * B_MP * T_B * f(N),  f(N) = f_a / N + f_b
// unless crossover_table has an entry for N, which then replaces the product.
struct DispatchParams {
  std::size_t multiprocessors = 1;
  std::size_t blocks_per_multiprocessor = 1;
  std::size_t threads_per_block = 1;
  double f_a = 0.0;
  double f_b = 1.0;
  CrossoverTable crossover_table;

  double penalty(std::size_t episode_size) const;
  double threshold(std::size_t episode_size) const;
  // Throws InvalidArgument for zero counts or f(N) <= 0 on 1..max_level.
  void validate(std::optional<std::size_t> max_level = std::nullopt) const;

  // CPU calibration: MP = hardware threads, B_MP = T_B = 1, f fitted to the
  // GPU crossover table.
  static DispatchParams cpu_default();
  // The GPU testbed configuration (MP = 30, B_MP = 1, T_B = 32) with the
  // measured crossover table as overrides.
  static DispatchParams gpu_reference();
};

// Measured crossover points of the reference GPU (episode sizes 3..8).
const CrossoverTable& gpu_crossover_table();

Strategy choose_strategy(std::size_t candidates, std::size_t episode_size, const DispatchParams& params);

enum class FitForm {
  Reciprocal,  // f(N) = a / N + b
  Linear,      // f(N) = a * N + b
};

struct CrossoverFit {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // Euclidean norm of the residual vector
};

// Least-squares fit of crossover(N) / (MP * B_MP * T_B) to the chosen form.
// Throws DegenerateFit with fewer than two distinct N.
CrossoverFit fit_crossover(const CrossoverTable& table, std::size_t multiprocessors,
                           std::size_t blocks_per_multiprocessor, std::size_t threads_per_block,
                           FitForm form = FitForm::Reciprocal);

}  // namespace epm
