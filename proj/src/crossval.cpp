#include "flare/crossval.hpp"

#include <exception>
#include <random>
#include <utility>

#include "flare/error.hpp"
#include "flare/learner.hpp"

namespace flare {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer applied to a running combination
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
  return p;
}

std::vector<int> assign_folds(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 2) throw Error("cross-validation needs at least two folds");
  if (n < static_cast<std::size_t>(folds)) throw Error("fewer examples than folds");
  const auto p = permutation(n, seed);
  std::vector<int> fold_of(n);
  for (std::size_t k = 0; k < n; ++k) fold_of[p[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
  return fold_of;
}

Trial run_trial(const Schema& schema_in, std::span<const Vector> data, const std::vector<int>& fold_of, int fold,
                int ordering, const EvalConfig& cfg) {
  Schema schema = schema_in;
  if (cfg.delta_fraction) schema.set_delta_fraction(*cfg.delta_fraction);
  ReasonConfig rc;
  rc.td_threshold = cfg.td_threshold;
  rc.rng_seed = mix_seed(cfg.rng_seed, 0x7e57, static_cast<std::uint64_t>(fold));

  Trial t;
  t.fold = fold;
  t.ordering = ordering;
  std::vector<std::size_t> train;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (fold_of[i] != fold) train.push_back(i);
  t.train_size = train.size();

  KnowledgeBase kb(schema);
  for (const auto& p : cfg.precepts) learn(kb, p, rc);
  const auto order = permutation(train.size(), mix_seed(cfg.rng_seed, static_cast<std::uint64_t>(fold) + 1,
                                                        static_cast<std::uint64_t>(ordering) + 1));
  for (auto k : order) learn(kb, data[train[k]], rc);
  t.kb_size = kb.size();

  for (std::size_t i = 0; i < data.size(); ++i) {
    if (fold_of[i] != fold) continue;
    ++t.test_size;
    Vector q = data[i];
    const ValueIndex actual = q.target_cell().index();
    q[q.target] = Cell::dont_know();
    const auto outcome = reason(std::as_const(kb), q, rc);
    if (outcome.derived_target && *outcome.derived_target == actual) ++t.correct;
  }
  return t;
}

namespace {

void check(std::span<const Vector> data, const EvalConfig& cfg) {
  if (data.empty()) throw Error("empty dataset");
  if (cfg.orderings_per_fold < 1) throw Error("need at least one ordering per fold");
  for (const auto& v : data)
    if (v.target != data.front().target) throw Error("examples disagree on the target attribute");
}

EvalResult summarize(std::vector<Trial> trials) {
  EvalResult r;
  for (const auto& t : trials) {
    r.predictive_accuracy += t.accuracy();
    r.inductive_ratio += t.inductive_ratio();
  }
  r.predictive_accuracy /= static_cast<double>(trials.size());
  r.inductive_ratio /= static_cast<double>(trials.size());
  r.trials = std::move(trials);
  return r;
}

}  // namespace

EvalResult cross_validate(const Schema& schema, std::span<const Vector> data, const EvalConfig& cfg) {
  check(data, cfg);
  const auto fold_of = assign_folds(data.size(), cfg.folds, cfg.rng_seed);
  const int total = cfg.folds * cfg.orderings_per_fold;
  std::vector<Trial> trials(static_cast<std::size_t>(total));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < total; ++k) {
    try {
      trials[k] = run_trial(schema, data, fold_of, k / cfg.orderings_per_fold, k % cfg.orderings_per_fold, cfg);
    } catch (...) {
#pragma omp critical(flare_cv_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(std::move(trials));
}

EvalResult cross_validate_serial(const Schema& schema, std::span<const Vector> data, const EvalConfig& cfg) {
  check(data, cfg);
  const auto fold_of = assign_folds(data.size(), cfg.folds, cfg.rng_seed);
  std::vector<Trial> trials;
  for (int f = 0; f < cfg.folds; ++f)
    for (int o = 0; o < cfg.orderings_per_fold; ++o) trials.push_back(run_trial(schema, data, fold_of, f, o, cfg));
  return summarize(std::move(trials));
}

}  // namespace flare
