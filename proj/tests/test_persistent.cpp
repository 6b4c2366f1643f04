#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "wasym/util/persistent.hpp"

using namespace wasym;

TEST_CASE("pstack basics") {
  PStack<int> s;
  REQUIRE(s.empty());
  auto s1 = s.push(1).push(2).push(3);
  REQUIRE(s1.size() == 3);
  REQUIRE(s1.top() == 3);
  REQUIRE(s1.peek(2) == 1);
  auto s2 = s1.pop();
  REQUIRE(s2.top() == 2);
  REQUIRE(s1.top() == 3);  // original untouched
  auto v = s1.to_vector_bottom_up();
  REQUIRE(v == std::vector<int>{1, 2, 3});
}

TEST_CASE("pmap matches std::map under random ops") {
  std::mt19937 rng(7);
  PMap<uint32_t, int> pm;
  std::map<uint32_t, int> ref;
  std::vector<PMap<uint32_t, int>> snapshots;
  std::vector<std::map<uint32_t, int>> ref_snapshots;

  for (int i = 0; i < 4000; ++i) {
    uint32_t k = rng() % 500;
    int action = rng() % 10;
    if (action < 6) {
      int v = int(rng() % 1000);
      pm = pm.set(k, v);
      ref[k] = v;
    } else if (action < 8) {
      pm = pm.erase(k);
      ref.erase(k);
    } else {
      snapshots.push_back(pm);
      ref_snapshots.push_back(ref);
    }
    REQUIRE(pm.size() == ref.size());
    const int* found = pm.find(k);
    auto rit = ref.find(k);
    REQUIRE((found != nullptr) == (rit != ref.end()));
    if (found) REQUIRE(*found == rit->second);
  }

  // old versions are unaffected by later mutation
  for (size_t i = 0; i < snapshots.size(); ++i) {
    auto items = snapshots[i].items();
    std::vector<std::pair<uint32_t, int>> expect(ref_snapshots[i].begin(),
                                                 ref_snapshots[i].end());
    REQUIRE(items == expect);
  }
}

TEST_CASE("pmap floor") {
  PMap<uint32_t, int> pm;
  pm = pm.set(10, 1).set(20, 2).set(30, 3);
  REQUIRE(!pm.floor(9).has_value());
  REQUIRE(pm.floor(10)->second == 1);
  REQUIRE(pm.floor(19)->second == 1);
  REQUIRE(pm.floor(20)->second == 2);
  REQUIRE(pm.floor(1000)->second == 3);
}

TEST_CASE("cowvec isolation") {
  CowVec<int> a(std::vector<int>{1, 2, 3});
  auto b = a.with(1, 99);
  REQUIRE(a[1] == 2);
  REQUIRE(b[1] == 99);
}
