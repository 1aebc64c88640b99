#include "flare/kernels.hpp"

#include <limits>

#include "flare/metrics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flare::kernels {

namespace {

constexpr double kSkip = std::numeric_limits<double>::infinity();

double rule_distance(const Schema& schema, const StoredRule& rule, const Vector& probe) {
  if (rule.vector.target != probe.target) return kSkip;
  if (num_asserted(rule.vector) == 0) return kSkip;
  return distance(schema, rule.vector, probe);
}

// Shared serial reduction so both scans break ties identically.
Nearest reduce(const std::vector<double>& dist) {
  Nearest out;
  double best = kSkip;
  for (double d : dist)
    if (d < best) best = d;
  if (best == kSkip) return out;
  out.distance = best;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] != kSkip && dist[i] - best <= kTieTolerance) out.positions.push_back(i);
  return out;
}

bool in_parallel() {
#ifdef _OPENMP
  return omp_in_parallel() != 0;
#else
  return true;
#endif
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Nearest nearest_serial(const KnowledgeBase& kb, const Vector& probe) {
  const auto rules = kb.rules();
  std::vector<double> dist(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) dist[i] = rule_distance(kb.schema(), rules[i], probe);
  return reduce(dist);
}

Nearest nearest_parallel(const KnowledgeBase& kb, const Vector& probe) {
  const auto rules = kb.rules();
  const auto n = static_cast<std::ptrdiff_t>(rules.size());
  std::vector<double> dist(rules.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) dist[i] = rule_distance(kb.schema(), rules[i], probe);
  return reduce(dist);
}

Nearest nearest(const KnowledgeBase& kb, const Vector& probe) {
  if (kb.size() >= kParallelThreshold && !in_parallel()) return nearest_parallel(kb, probe);
  return nearest_serial(kb, probe);
}

std::vector<std::size_t> covering_serial(const KnowledgeBase& kb, const Vector& probe) {
  std::vector<std::size_t> out;
  const auto rules = kb.rules();
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].vector.target == probe.target && covers(kb.schema(), rules[i].vector, probe))
      out.push_back(i);
  return out;
}

std::vector<std::size_t> covering_parallel(const KnowledgeBase& kb, const Vector& probe) {
  const auto rules = kb.rules();
  const auto n = static_cast<std::ptrdiff_t>(rules.size());
  std::vector<unsigned char> hit(rules.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    hit[i] = rules[i].vector.target == probe.target && covers(kb.schema(), rules[i].vector, probe);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (hit[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> covering(const KnowledgeBase& kb, const Vector& probe) {
  if (kb.size() >= kParallelThreshold && !in_parallel()) return covering_parallel(kb, probe);
  return covering_serial(kb, probe);
}

}  // namespace flare::kernels
