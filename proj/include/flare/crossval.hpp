#pragma once

// k-fold cross-validation with several training orders per fold.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flare/model.hpp"
#include "flare/reasoner.hpp"

namespace flare {

struct EvalConfig {
  int folds = 10;
  int orderings_per_fold = 10;
  std::uint64_t rng_seed = 1;
  double td_threshold = 0.0;
  std::optional<double> delta_fraction;
  /// Learned, in order, into every fresh knowledge base before training.
  std::vector<Vector> precepts;
};

struct Trial {
  int fold = 0;
  int ordering = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t correct = 0;
  std::size_t kb_size = 0;

  double accuracy() const { return test_size ? 100.0 * static_cast<double>(correct) / test_size : 0.0; }
  double inductive_ratio() const { return train_size ? static_cast<double>(kb_size) / train_size : 0.0; }
};

struct EvalResult {
  /// Mean over trials, in percent.
  double predictive_accuracy = 0.0;
  /// Mean over trials of final KB size / training examples.
  double inductive_ratio = 0.0;
  std::vector<Trial> trials;
};

/// Stateless 64-bit mixer used to derive per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Deterministic Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed);

/// Fold index of every example; fold sizes differ by at most one.
std::vector<int> assign_folds(std::size_t n, int folds, std::uint64_t seed);

/// Trials run in parallel over fold x ordering.
EvalResult cross_validate(const Schema& schema, std::span<const Vector> data, const EvalConfig& cfg);
/// Same computation, one trial after another.
EvalResult cross_validate_serial(const Schema& schema, std::span<const Vector> data, const EvalConfig& cfg);

/// One fold/ordering: fresh KB, precepts, shuffled training set, scoring.
Trial run_trial(const Schema& schema, std::span<const Vector> data, const std::vector<int>& fold_of,
                int fold, int ordering, const EvalConfig& cfg);

}  // namespace flare
