#include <random>

#include "doctest.h"
#include "nslice/reachability.hpp"
#include "support/graph_oracles.hpp"
#include "support/toys.hpp"

using namespace nslice;

TEST_CASE("closure of the toy chain") {
  const InstanceIndex idx(testing::toy_chain());
  const ReachabilityMatrix m = transitive_closure(idx);
  const int S = idx.node_index("S"), D = idx.node_index("D");
  const int n1 = idx.node_index("1"), n3 = idx.node_index("3");
  CHECK(m.at(S, D));
  CHECK_FALSE(m.at(n3, n1));
  CHECK(m.at(S, S));  // length-zero path convention

  const UnreachableSets sets = unreachable_sets(m, idx);
  CHECK(sets.from_source[0].empty());
  CHECK(sets.to_destination[0].empty());
  CHECK(sets.from_cloud[idx.cloud_slot(idx.node_index("1"))].empty());
  CHECK(sets.from_cloud[idx.cloud_slot(idx.node_index("2"))] ==
        std::vector<int>{idx.node_index("1")});
  CHECK(sets.from_cloud[idx.cloud_slot(idx.node_index("3"))] ==
        std::vector<int>{idx.node_index("1"), idx.node_index("2")});
}

TEST_CASE("closure with no links is the identity pattern") {
  Instance ins;
  ins.network.nodes = {"a", "b", "c"};
  const InstanceIndex idx(ins);
  const ReachabilityMatrix m = transitive_closure(idx);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m.at(i, j) == (i == j));
}

TEST_CASE("closure matches the Floyd-Warshall oracle on random digraphs") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const InstanceIndex idx(
        testing::random_digraph(rng, 8, testing::uniform_real(rng, 0.05, 0.4)));
    const auto closure = transitive_closure(idx);
    const auto oracle = testing::floyd_warshall(idx);
    for (int i = 0; i < idx.node_count(); ++i)
      for (int j = 0; j < idx.node_count(); ++j)
        CHECK(closure.at(i, j) == oracle[i][j]);
  }
}

TEST_CASE("parallel closure equals the serial reference") {
  std::mt19937_64 rng(7);
  const InstanceIndex idx(testing::random_digraph(rng, 60, 0.05));
  const auto parallel = transitive_closure(idx);
  const auto serial = transitive_closure_serial(idx);
  CHECK(parallel.bits == serial.bits);
}

TEST_CASE("unreachable sets agree with per-pair BFS") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Instance ins = testing::random_digraph(rng, 9, 0.2, 4);
    Service s;
    s.id = "svc";
    s.source = ins.network.nodes[5];
    s.destination = ins.network.nodes[6];
    s.rate_before = 1.0;
    Stage st;
    st.function = "f";
    st.rate_after = 1.0;
    st.placement_cost[ins.network.nodes[0]] = 1.0;
    s.chain = {st};
    ins.services.push_back(s);

    const InstanceIndex idx(ins);
    const auto sets = unreachable_sets(transitive_closure(idx), idx);
    for (const auto& cloud : idx.clouds()) {
      const int v = cloud.node;
      const bool in_vs =
          std::find(sets.from_source[0].begin(), sets.from_source[0].end(),
                    v) != sets.from_source[0].end();
      CHECK(in_vs == !testing::bfs_reaches(idx, idx.services()[0].source, v));
      const bool in_vd =
          std::find(sets.to_destination[0].begin(),
                    sets.to_destination[0].end(),
                    v) != sets.to_destination[0].end();
      CHECK(in_vd ==
            !testing::bfs_reaches(idx, v, idx.services()[0].destination));
    }
  }
}

// If v' is reachable from v0 then everything unreachable from v0 is also
// unreachable from v', and the source/destination variants of the same
// inclusion.
TEST_CASE("unreachable-set inclusions hold on random digraphs") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    Instance ins = testing::random_digraph(rng, 10, 0.15, 5);
    Service s;
    s.id = "svc";
    s.source = ins.network.nodes[7];
    s.destination = ins.network.nodes[8];
    s.rate_before = 1.0;
    Stage st;
    st.function = "f";
    st.rate_after = 1.0;
    st.placement_cost[ins.network.nodes[0]] = 1.0;
    s.chain = {st};
    ins.services.push_back(s);

    const InstanceIndex idx(ins);
    const auto m = transitive_closure(idx);
    const auto sets = unreachable_sets(m, idx);

    auto contains = [](const std::vector<int>& set, int v) {
      return std::find(set.begin(), set.end(), v) != set.end();
    };
    auto subset_of = [&](const std::vector<int>& a, const std::vector<int>& b) {
      for (int v : a)
        if (!contains(b, v)) return false;
      return true;
    };

    for (int c0 = 0; c0 < idx.cloud_count(); ++c0) {
      const int v0 = idx.clouds()[c0].node;
      for (int c1 = 0; c1 < idx.cloud_count(); ++c1) {
        const int v1 = idx.clouds()[c1].node;
        if (!contains(sets.from_cloud[c0], v1)) {
          // v1 in V \ V(v0): no path may leave V \ V(v0) into V(v0).
          for (int u : sets.from_cloud[c0]) CHECK_FALSE(m.at(v1, u));
          CHECK(subset_of(sets.from_cloud[c0], sets.from_cloud[c1]));
        }
      }
      const int k = 0;
      if (!contains(sets.from_source[k], v0))
        CHECK(subset_of(sets.from_source[k], sets.from_cloud[c0]));
      if (contains(sets.to_destination[k], v0)) {
        // Complement of V(D^k) within the cloud set is unreachable from v0.
        for (int c1 = 0; c1 < idx.cloud_count(); ++c1) {
          const int v1 = idx.clouds()[c1].node;
          if (v1 != v0 && !contains(sets.to_destination[k], v1))
            CHECK(contains(sets.from_cloud[c0], v1));
        }
      }
    }
  }
}
