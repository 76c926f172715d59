#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "eplab/parallel.hpp"

using namespace eplab;

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  parallel_for(0, [](std::size_t) { FAIL("called"); });
}

TEST_CASE("parallel_for rethrows") {
  setenv("EPLAB_THREADS", "4", 1);
  std::atomic<int> done{0};
  CHECK_THROWS_AS(parallel_for(64,
                               [&](std::size_t i) {
                                 if (i == 10) throw std::runtime_error("boom");
                                 done++;
                               }),
                  std::runtime_error);
  CHECK(done.load() == 63);
  unsetenv("EPLAB_THREADS");
}

TEST_CASE("worker count honours EPLAB_THREADS") {
  setenv("EPLAB_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("EPLAB_THREADS", "zero", 1);
  CHECK(worker_count() >= 1);
  unsetenv("EPLAB_THREADS");
  CHECK(worker_count() >= 1);
}
