#include "catch2/catch_amalgamated.hpp"

#include <array>
#include <limits>
#include <vector>

#include "nlcps/domain.hpp"
#include "nlcps/rng.hpp"

using Catch::Matchers::WithinAbs;
using nlcps::ClusterContext;
using nlcps::NodeFeatures;
using nlcps::NormalizedFeatures;
using nlcps::PerformanceProfile;
using nlcps::Rng;
using nlcps::ValidationError;

namespace {

ClusterContext make_context(std::vector<NodeFeatures> nodes) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ids.push_back("n" + std::to_string(i + 1));
  }
  return ClusterContext(std::move(nodes), std::move(ids));
}

}  // namespace

TEST_CASE("cluster context validates its shape") {
  CHECK_THROWS_AS(ClusterContext({}, {}), ValidationError);
  CHECK_THROWS_AS(ClusterContext({{1, 1.0, 10.0}}, {"a", "b"}), ValidationError);
  CHECK_THROWS_AS(ClusterContext({{1, 1.0, 10.0}, {2, 2.0, 20.0}}, {"a", "a"}), ValidationError);
  CHECK_THROWS_AS(ClusterContext({{1, 1.0, 10.0}, {2, 2.0, 20.0}}, {"a", "b"}, {"r"}),
                  ValidationError);
  CHECK_THROWS_AS(ClusterContext({{0, 1.0, 10.0}, {2, 2.0, 20.0}}, {"a", "b"}), ValidationError);
  CHECK_THROWS_AS(ClusterContext({{1, -1.0, 10.0}, {2, 2.0, 20.0}}, {"a", "b"}), ValidationError);
  CHECK_THROWS_AS(ClusterContext({{1, 1.0, 0.0}, {2, 2.0, 20.0}}, {"a", "b"}), ValidationError);
}

TEST_CASE("normalize: distinct cpu column maps onto [0,1]") {
  const ClusterContext ctx = make_context({{1, 4.0, 50.0}, {2, 4.0, 60.0}, {4, 4.0, 70.0}});
  const NormalizedFeatures norm = nlcps::normalize(ctx);
  CHECK_THAT(norm.values[0][0], WithinAbs(0.0, 1e-15));
  CHECK_THAT(norm.values[1][0], WithinAbs(1.0 / 3.0, 1e-15));
  CHECK_THAT(norm.values[2][0], WithinAbs(1.0, 1e-15));
}

TEST_CASE("normalize: latency column hand-checked") {
  const ClusterContext ctx =
      make_context({{4, 4.0, 120.8}, {2, 1.0, 110.1}, {2, 2.0, 108.8}});
  const NormalizedFeatures norm = nlcps::normalize(ctx);
  CHECK_THAT(norm.values[0][2], WithinAbs(1.0, 1e-15));
  CHECK_THAT(norm.values[1][2], WithinAbs((110.1 - 108.8) / (120.8 - 108.8), 1e-12));
  CHECK_THAT(norm.values[2][2], WithinAbs(0.0, 1e-15));
}

TEST_CASE("normalize: constant column maps to 0.5") {
  const ClusterContext ctx = make_context({{1, 4.0, 50.0}, {2, 4.0, 60.0}, {4, 4.0, 70.0}});
  const NormalizedFeatures norm = nlcps::normalize(ctx);
  for (const auto& row : norm.values) {
    CHECK(row[1] == 0.5);
  }
}

TEST_CASE("normalize rejects single-node contexts") {
  const ClusterContext one({{2, 2.0, 50.0}}, {"only"});
  CHECK_THROWS_AS(nlcps::normalize(one), ValidationError);
}

TEST_CASE("normalize output always lies in [0,1]") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<NodeFeatures> nodes;
    const int n = 2 + static_cast<int>(rng.uniform_index(11));
    for (int i = 0; i < n; ++i) {
      nodes.push_back({1 + static_cast<int>(rng.uniform_index(8)), rng.uniform(0.5, 16.0),
                       rng.uniform(10.0, 150.0)});
    }
    const NormalizedFeatures norm = nlcps::normalize(make_context(std::move(nodes)));
    for (const auto& row : norm.values) {
      for (double v : row) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
      }
    }
  }
}

TEST_CASE("normalize preserves within-column order") {
  Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<NodeFeatures> nodes;
    for (int i = 0; i < 6; ++i) {
      nodes.push_back({1 + static_cast<int>(rng.uniform_index(8)), rng.uniform(0.5, 16.0),
                       rng.uniform(10.0, 150.0)});
    }
    const ClusterContext ctx = make_context(nodes);
    const NormalizedFeatures norm = nlcps::normalize(ctx);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = 0; b < nodes.size(); ++b) {
        if (nodes[a].avg_latency_ms < nodes[b].avg_latency_ms) {
          REQUIRE(norm.values[a][2] < norm.values[b][2]);
        }
        if (nodes[a].memory_gb < nodes[b].memory_gb) {
          REQUIRE(norm.values[a][1] < norm.values[b][1]);
        }
      }
    }
  }
}

TEST_CASE("normalize is invariant to positive affine rescaling of a column") {
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<NodeFeatures> nodes;
    for (int i = 0; i < 5; ++i) {
      nodes.push_back({1 + static_cast<int>(rng.uniform_index(8)), rng.uniform(0.5, 16.0),
                       rng.uniform(10.0, 150.0)});
    }
    const double k = rng.uniform(0.5, 3.0);
    const double b = rng.uniform(0.0, 40.0);
    std::vector<NodeFeatures> scaled = nodes;
    for (NodeFeatures& f : scaled) {
      f.avg_latency_ms = k * f.avg_latency_ms + b;
    }
    const NormalizedFeatures a = nlcps::normalize(make_context(nodes));
    const NormalizedFeatures c = nlcps::normalize(make_context(scaled));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      REQUIRE_THAT(c.values[i][2], WithinAbs(a.values[i][2], 1e-12));
    }
  }
}

TEST_CASE("normalize is idempotent on already-normalized columns") {
  // Columns that already span [0,1] with min 0 and max 1 pass through
  // unchanged (up to rounding).
  const ClusterContext ctx = make_context({{1, 1.0, 10.0}, {2, 4.0, 100.0}, {4, 8.0, 150.0}});
  const NormalizedFeatures once = nlcps::normalize(ctx);
  std::vector<NodeFeatures> renodes;
  for (const auto& row : once.values) {
    // cpu_cores is integral; use a synthetic integer column spanning 0..1
    // by scaling — instead verify on the real-valued columns only.
    renodes.push_back({1, row[1] + 1.0, row[2] + 1.0});  // shift to stay positive
  }
  renodes[0].cpu_cores = 1;
  renodes[1].cpu_cores = 2;
  renodes[2].cpu_cores = 4;
  const NormalizedFeatures twice = nlcps::normalize(make_context(renodes));
  for (std::size_t i = 0; i < once.values.size(); ++i) {
    CHECK_THAT(twice.values[i][1], WithinAbs(once.values[i][1], 1e-12));
    CHECK_THAT(twice.values[i][2], WithinAbs(once.values[i][2], 1e-12));
  }
}

TEST_CASE("flatten emits row-major triples") {
  const ClusterContext two = make_context({{1, 1.0, 10.0}, {2, 2.0, 20.0}});
  CHECK(nlcps::flatten(two) == std::vector<double>{1.0, 1.0, 10.0, 2.0, 2.0, 20.0});

  std::vector<NodeFeatures> five(5, NodeFeatures{2, 4.0, 50.0});
  CHECK(nlcps::flatten(make_context(five)).size() == 15);
  std::vector<NodeFeatures> twelve(12, NodeFeatures{2, 4.0, 50.0});
  CHECK(nlcps::flatten(make_context(twelve)).size() == 36);
}

TEST_CASE("performance profile validation enforces metric ranges") {
  PerformanceProfile ok{20.0, 50.0, 50.0, 150.0, 2.0, 1.0};
  CHECK_NOTHROW(nlcps::validate(ok));

  PerformanceProfile bad = ok;
  bad.cpu_util_pct = 101.0;
  CHECK_THROWS_AS(nlcps::validate(bad), ValidationError);
  bad = ok;
  bad.success_rate = 1.5;
  CHECK_THROWS_AS(nlcps::validate(bad), ValidationError);
  bad = ok;
  bad.pod_throughput_ppm = -1.0;
  CHECK_THROWS_AS(nlcps::validate(bad), ValidationError);
  bad = ok;
  bad.api_latency_ms = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(nlcps::validate(bad), ValidationError);
}
