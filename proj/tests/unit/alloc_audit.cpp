// Every auxiliary allocation of an algorithm must go through the metered
// allocators (which use malloc directly). This binary replaces global
// operator new and fails if an algorithm reaches it.

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <new>
#include <random>
#include <vector>

#include "sublin/approx_bias.hpp"
#include "sublin/approx_ls.hpp"
#include "sublin/generators.hpp"
#include "sublin/planar.hpp"
#include "sublin/tree_dp.hpp"

namespace {
std::atomic<bool> g_watch{false};
std::atomic<std::uint64_t> g_hits{0};
}  // namespace

void* operator new(std::size_t n) {
  if (g_watch.load(std::memory_order_relaxed)) g_hits.fetch_add(1, std::memory_order_relaxed);
  if (void* p = std::malloc(n == 0 ? 1 : n)) return p;
  throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return ::operator new(n); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

namespace sublin {
namespace {

template <class Body>
std::uint64_t unmetered_news(Body&& body) {
  g_hits = 0;
  const SpaceReport r = meter_scope("audit", [&] {
    g_watch = true;
    body();
    g_watch = false;
  });
  (void)r;
  return g_hits.load();
}

Formula sample_cnf() {
  std::mt19937_64 rng(3);
  return random_cnf(12, 40, 3, rng);
}

Formula sample_planar() {
  PlanarOptions o;
  o.kind = PlanarKind::grid;
  o.width = 5;
  o.height = 4;
  o.seed = 9;
  return gen_planar_instance(o).formula;
}

TEST(AllocAudit, HalfApprox) {
  const Formula f = sample_cnf();
  EXPECT_EQ(unmetered_news([&] { (void)half_approx(f); }), 0u);
}

TEST(AllocAudit, LsSolve) {
  const Formula f = sample_cnf();
  EXPECT_EQ(unmetered_news([&] { (void)ls_solve(f); }), 0u);
}

TEST(AllocAudit, ChouSolve) {
  const Formula f = sample_cnf();
  EXPECT_EQ(unmetered_news([&] { (void)chou_solve(f); }), 0u);
}

TEST(AllocAudit, Partition) {
  const Formula f = sample_planar();
  EXPECT_EQ(unmetered_news([&] {
              const PartitionStream s = partition(f, 3);
              s.scan([](const PartView&) {});
            }),
            0u);
}

TEST(AllocAudit, PlanarPtas) {
  const Formula f = sample_planar();
  EXPECT_EQ(unmetered_news([&] { (void)planar_ptas(f, 1, 3); }), 0u);
}

TEST(AllocAudit, DetectorWorks) {
  EXPECT_GT(unmetered_news([] {
              std::vector<int> v(static_cast<std::size_t>(g_hits.load() + 8));
              volatile int sink = v[0];
              (void)sink;
            }),
            0u);
}

}  // namespace
}  // namespace sublin
