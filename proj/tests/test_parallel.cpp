#include "doctest.h"

#include <atomic>
#include <cstdint>
#include <vector>

#include "ties/parallel.hpp"
#include "ties/rng.hpp"

using namespace ties;

namespace {

// A workload with per-slot output so runs can be compared bitwise.
std::vector<std::uint64_t> run_workload(int threads) {
  parallel::set_max_threads(threads);
  std::vector<std::uint64_t> out(5000);
  parallel::parallel_for(out.size(), [&](std::size_t i) {
    std::uint64_t h = mix64(i);
    for (int k = 0; k < 50; ++k) h = mix64(h ^ k);
    out[i] = h;
  });
  parallel::set_max_threads(0);
  return out;
}

}  // namespace

TEST_CASE("thread cap round-trips") {
  parallel::set_max_threads(3);
  CHECK(parallel::max_threads() == 3);
  parallel::set_max_threads(0);
  CHECK(parallel::max_threads() == 0);
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<std::atomic<int>> hits(997);
  parallel::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (const auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("parallel_for with zero iterations never calls fn") {
  bool called = false;
  parallel::parallel_for(0, [&](std::size_t) { called = true; });
  CHECK_FALSE(called);
}

TEST_CASE("serial and parallel runs are bit-identical") {
  const std::vector<std::uint64_t> serial = run_workload(1);
  const std::vector<std::uint64_t> parallel4 = run_workload(4);
  const std::vector<std::uint64_t> unlimited = run_workload(0);
  CHECK(serial == parallel4);
  CHECK(serial == unlimited);
}

TEST_CASE("enabled() agrees with the build and the cap") {
  parallel::set_max_threads(1);
  CHECK_FALSE(parallel::enabled());  // one thread is always the serial path
  parallel::set_max_threads(0);
#ifndef _OPENMP
  CHECK_FALSE(parallel::enabled());
#endif
}
