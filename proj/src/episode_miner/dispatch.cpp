#include "episode_miner/dispatch.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "episode_miner/model.hpp"

namespace epm {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::EpisodeParallel: return "episode-parallel";
    case Strategy::SegmentParallel: return "segment-parallel";
  }
  return "unknown";
}

const CrossoverTable& gpu_crossover_table() {
  static const CrossoverTable table{{3, 415}, {4, 190}, {5, 200}, {6, 100}, {7, 100}, {8, 60}};
  return table;
}

double DispatchParams::penalty(std::size_t episode_size) const {
  return f_a / static_cast<double>(episode_size) + f_b;
}

double DispatchParams::threshold(std::size_t episode_size) const {
  if (auto it = crossover_table.find(episode_size); it != crossover_table.end()) return it->second;
  return static_cast<double>(multiprocessors * blocks_per_multiprocessor * threads_per_block) *
         penalty(episode_size);
}

void DispatchParams::validate(std::optional<std::size_t> max_level) const {
  if (multiprocessors == 0 || blocks_per_multiprocessor == 0 || threads_per_block == 0) {
    throw Error(ErrorCode::InvalidArgument, "dispatch counts MP, B_MP and T_B must be positive");
  }
  if (!std::isfinite(f_a) || !std::isfinite(f_b)) {
    throw Error(ErrorCode::InvalidArgument, "dispatch coefficients must be finite");
  }
  if (max_level) {
    for (std::size_t n = 1; n <= *max_level; ++n) {
      if (!(penalty(n) > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "f(N) must be positive for N = " + std::to_string(n));
      }
    }
  }
}

DispatchParams DispatchParams::cpu_default() {
  DispatchParams p;
  p.multiprocessors = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const CrossoverFit fit = fit_crossover(gpu_crossover_table(), 30, 1, 32);
  p.f_a = fit.a;
  p.f_b = fit.b;
  return p;
}

DispatchParams DispatchParams::gpu_reference() {
  DispatchParams p;
  p.multiprocessors = 30;
  p.blocks_per_multiprocessor = 1;
  p.threads_per_block = 32;
  const CrossoverFit fit = fit_crossover(gpu_crossover_table(), 30, 1, 32);
  p.f_a = fit.a;
  p.f_b = fit.b;
  p.crossover_table = gpu_crossover_table();
  return p;
}

Strategy choose_strategy(std::size_t candidates, std::size_t episode_size, const DispatchParams& params) {
  return static_cast<double>(candidates) > params.threshold(episode_size) ? Strategy::EpisodeParallel
                                                                          : Strategy::SegmentParallel;
}

CrossoverFit fit_crossover(const CrossoverTable& table, std::size_t multiprocessors,
                           std::size_t blocks_per_multiprocessor, std::size_t threads_per_block, FitForm form) {
  if (table.size() < 2) throw Error(ErrorCode::DegenerateFit, "crossover fit needs at least two episode sizes");
  const double scale = static_cast<double>(multiprocessors * blocks_per_multiprocessor * threads_per_block);
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "dispatch counts must be positive");

  // Normal equations for y = a * x + b.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(table.size());
  for (const auto& [n, crossover] : table) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "episode size must be positive");
    const double x = form == FitForm::Reciprocal ? 1.0 / static_cast<double>(n) : static_cast<double>(n);
    const double y = crossover / scale;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = m * sxx - sx * sx;
  if (!(std::abs(det) > 1e-300)) throw Error(ErrorCode::DegenerateFit, "all episode sizes are identical");

  CrossoverFit fit;
  fit.a = (m * sxy - sx * sy) / det;
  fit.b = (sy - fit.a * sx) / m;
  double ss = 0;
  for (const auto& [n, crossover] : table) {
    const double x = form == FitForm::Reciprocal ? 1.0 / static_cast<double>(n) : static_cast<double>(n);
    const double r = crossover / scale - (fit.a * x + fit.b);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss);
  return fit;
}

}  // namespace epm
