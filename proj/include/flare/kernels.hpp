#pragma once

// Data-parallel scans over the rules of a knowledge base.
//
// Each scan has a serial reference and an OpenMP version. Both compute the
// per-rule distances independently and reduce them in rule order, so the two
// return identical results; tests compare them directly.

#include <cstddef>
#include <vector>

#include "flare/model.hpp"

namespace flare::kernels {

struct Nearest {
  /// Minimum distance over eligible rules; meaningless when `positions` is empty.
  double distance = 0.0;
  /// Positions in kb.rules() of every rule within kTieTolerance of the
  /// minimum, ascending.
  std::vector<std::size_t> positions;
};

/// Rules whose target is `probe.target`, nearest to `probe` under D.
/// Rules for which D is undefined are skipped.
Nearest nearest_serial(const KnowledgeBase& kb, const Vector& probe);
Nearest nearest_parallel(const KnowledgeBase& kb, const Vector& probe);

/// Picks the parallel scan for large knowledge bases when not already
/// inside a parallel region.
Nearest nearest(const KnowledgeBase& kb, const Vector& probe);

/// Positions of the rules with target `probe.target` that cover `probe`.
std::vector<std::size_t> covering_serial(const KnowledgeBase& kb, const Vector& probe);
std::vector<std::size_t> covering_parallel(const KnowledgeBase& kb, const Vector& probe);
std::vector<std::size_t> covering(const KnowledgeBase& kb, const Vector& probe);

/// Rule count above which the dispatching scans go parallel.
inline constexpr std::size_t kParallelThreshold = 2048;

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads();

}  // namespace flare::kernels
