#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tlab/error.hpp"
#include "tlab/omega.hpp"

using tlab::OmegaWord;

namespace {

using tlab::oracle::brute_force_flip_exponent;

// Oracle: all words with entries in 1..max_entry and length <= len, filtered.
std::vector<OmegaWord> exhaustive(int max_reduced, int max_support) {
  std::set<OmegaWord> out;
  std::vector<int> cur;
  auto rec = [&](auto& self) -> void {
    if (!cur.empty()) {
      OmegaWord w(cur);
      if (tlab::is_admissible(w) && tlab::reduced_norm(w) <= max_reduced) out.insert(w);
    }
    if (static_cast<int>(cur.size()) == max_support) return;
    for (int e = 1; e <= max_reduced + 1; ++e) {
      cur.push_back(e);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return {out.begin(), out.end()};
}

}  // namespace

TEST_CASE("norms") {
  CHECK(tlab::norm(OmegaWord{1, 1}) == 2);
  CHECK(tlab::norm(OmegaWord{1, 2, 1}) == 4);
  CHECK(tlab::norm(OmegaWord{2}) == 2);
  CHECK(tlab::reduced_norm(OmegaWord{1, 1}) == 0);
  CHECK(tlab::reduced_norm(OmegaWord{1, 2, 1}) == 1);
  CHECK(tlab::reduced_norm(OmegaWord{1, 2, 2, 1}) == 2);
}

TEST_CASE("admissibility") {
  CHECK(tlab::is_admissible(OmegaWord{1, 2, 1}));
  CHECK(tlab::is_admissible(OmegaWord{2}));
  CHECK_FALSE(tlab::is_admissible(OmegaWord{1, 2}));
  CHECK_FALSE(tlab::is_admissible(OmegaWord{1}));
  CHECK_FALSE(tlab::is_admissible(OmegaWord{1, 1, 1}));
  CHECK(tlab::is_admissible(OmegaWord{3, 4, 1}));
  CHECK_FALSE(tlab::is_admissible(OmegaWord{}));
}

TEST_CASE("mirror") {
  CHECK(tlab::mirror(OmegaWord{1, 2, 1}) == OmegaWord{1, 2, 1});
  CHECK(tlab::mirror(OmegaWord{1, 2, 1, 2, 1}) == OmegaWord{1, 2, 1, 2, 1});
  CHECK(tlab::mirror(OmegaWord{3, 2, 1}) == OmegaWord{1, 2, 3});
}

TEST_CASE("flip sign exponent examples") {
  CHECK(brute_force_flip_exponent(OmegaWord{2}) == 0);
  CHECK(brute_force_flip_exponent(OmegaWord{1, 2, 1}) == 0);
  CHECK(brute_force_flip_exponent(OmegaWord{1, 2, 2, 1}) == 1);
  CHECK(tlab::flip_sign_exponent(OmegaWord{2}) == 0);
  CHECK(tlab::flip_sign_exponent(OmegaWord{1, 2, 1}) == 0);
  CHECK(tlab::flip_sign_exponent(OmegaWord{1, 2, 2, 1}) == 1);
}

TEST_CASE("flip sign exponent matches brute force for all admissible words of norm <= 10") {
  int checked = 0;
  for (const auto& w : tlab::enumerate_admissible(10, 10)) {
    if (tlab::norm(w) > 10) continue;
    CAPTURE(w.to_string());
    CHECK(tlab::flip_sign_exponent(w) == brute_force_flip_exponent(w));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("chain bound") {
  CHECK(tlab::chain_bound(2) == 1);
  CHECK(tlab::chain_bound(4) == 2);
  CHECK(tlab::chain_bound(5) == 2);
  CHECK(tlab::chain_bound(1) == 0);
  CHECK_THROWS_AS(tlab::chain_bound(0), tlab::Error);
}

TEST_CASE("enumeration") {
  auto a = tlab::enumerate_admissible(1, 3);
  REQUIRE(a.size() == 3);
  CHECK(a[0] == OmegaWord{2});
  CHECK(a[1] == OmegaWord{1, 1});
  CHECK(a[2] == OmegaWord{1, 2, 1});
  auto b = tlab::enumerate_admissible(0, 2);
  REQUIRE(b.size() == 1);
  CHECK(b[0] == OmegaWord{1, 1});
  CHECK(tlab::enumerate_admissible(0, 1).empty());
}

TEST_CASE("enumeration agrees with exhaustive generation") {
  for (int n = 0; n <= 4; ++n) {
    for (int s = 1; s <= 5; ++s) {
      auto got = tlab::enumerate_admissible(n, s);
      CHECK(got == exhaustive(n, s));
      CHECK(std::adjacent_find(got.begin(), got.end()) == got.end());
    }
  }
}

TEST_CASE("word invariants over the enumerated poset") {
  for (const auto& w : tlab::enumerate_admissible(4, 6)) {
    CHECK(tlab::reduced_norm(w) == tlab::norm(w) - static_cast<int>(w.size()));
    CHECK(tlab::mirror(tlab::mirror(w)) == w);
    CHECK(tlab::is_admissible(tlab::mirror(w)));
  }
}

TEST_CASE("serialization") {
  CHECK(OmegaWord{1, 2, 1}.to_string() == "121");
  CHECK(OmegaWord{1, 12, 1}.to_string() == "1,12,1");
  CHECK(OmegaWord::parse("121") == OmegaWord{1, 2, 1});
  CHECK(OmegaWord::parse("1,12,1") == OmegaWord{1, 12, 1});
  CHECK_THROWS_AS(OmegaWord::parse("1a"), tlab::SyntaxError);
  for (const auto& w : tlab::enumerate_admissible(3, 4)) CHECK(OmegaWord::parse(w.to_string()) == w);
}
