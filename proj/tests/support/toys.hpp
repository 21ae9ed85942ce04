#pragma once

#include "nslice/instance.hpp"

namespace nslice::testing {

// Five-node chain S -> 1 -> 2 -> 3 -> D with unlimited links. Nodes 1..3 are
// cloud nodes (mu = inf, inf, 3; zero activation power). One service S -> D
// with chain f1 -> f2 at rate 2 everywhere; hosting f1 on node 1 or 2 costs 1,
// every other placement is free. True optimum: 1.
inline Instance toy_chain() {
  Instance ins;
  ins.network.nodes = {"S", "1", "2", "3", "D"};
  for (const auto& [t, h] :
       {std::pair{"S", "1"}, {"1", "2"}, {"2", "3"}, {"3", "D"}})
    ins.network.links.push_back({t, h, Capacity::unlimited()});
  ins.network.cloud_nodes.push_back({"1", Capacity::unlimited(), 0.0});
  ins.network.cloud_nodes.push_back({"2", Capacity::unlimited(), 0.0});
  ins.network.cloud_nodes.push_back({"3", Capacity::finite(3.0), 0.0});

  Service s;
  s.id = "svc";
  s.source = "S";
  s.destination = "D";
  s.rate_before = 2.0;
  Stage f1;
  f1.function = "f1";
  f1.rate_after = 2.0;
  f1.placement_cost = {{"1", 1.0}, {"2", 1.0}, {"3", 0.0}};
  Stage f2;
  f2.function = "f2";
  f2.rate_after = 2.0;
  f2.placement_cost = {{"1", 0.0}, {"2", 0.0}, {"3", 0.0}};
  s.chain = {f1, f2};
  ins.services.push_back(std::move(s));
  return ins;
}

// Diamond A -> {B, C} -> D with link capacities C_AB = C_CD = 1 and
// C_AC = C_BD = 2. B and C are cloud nodes with mu = 2 and activation powers
// 1 and 2. Two unit-rate services A -> D, each with the single function f,
// free to place on either cloud. True optimum: 3 (both clouds on).
inline Instance toy_diamond() {
  Instance ins;
  ins.network.nodes = {"A", "B", "C", "D"};
  ins.network.links.push_back({"A", "B", Capacity::finite(1.0)});
  ins.network.links.push_back({"A", "C", Capacity::finite(2.0)});
  ins.network.links.push_back({"B", "D", Capacity::finite(2.0)});
  ins.network.links.push_back({"C", "D", Capacity::finite(1.0)});
  ins.network.cloud_nodes.push_back({"B", Capacity::finite(2.0), 1.0});
  ins.network.cloud_nodes.push_back({"C", Capacity::finite(2.0), 2.0});

  for (int k = 0; k < 2; ++k) {
    Service s;
    s.id = "s" + std::to_string(k);
    s.source = "A";
    s.destination = "D";
    s.rate_before = 1.0;
    Stage f;
    f.function = "f";
    f.rate_after = 1.0;
    f.placement_cost = {{"B", 0.0}, {"C", 0.0}};
    s.chain = {f};
    ins.services.push_back(std::move(s));
  }
  return ins;
}

}  // namespace nslice::testing
