#include <doctest.h>

#include <garchmom/parallel.hpp>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

using namespace garchmom;

TEST_CASE("every index runs exactly once") {
  for (unsigned threads : {1u, 2u, 7u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, threads);
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("exceptions reach the caller") {
  CHECK_THROWS_AS(parallel_for(
                      100,
                      [](std::size_t i) {
                        if (i == 42) throw std::runtime_error("boom");
                      },
                      4),
                  std::runtime_error);
}

TEST_CASE("thread count from the environment") {
  ::setenv("GARCHMOM_THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  ::setenv("GARCHMOM_THREADS", "zero", 1);
  CHECK(default_thread_count() >= 1);
  ::unsetenv("GARCHMOM_THREADS");
  CHECK(default_thread_count() >= 1);
}
