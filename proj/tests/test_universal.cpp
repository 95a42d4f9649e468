#include "doctest.h"

#include <thread>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "forge/constructions.hpp"
#include "forge/errors.hpp"
#include "forge/universal.hpp"

using namespace forge;

namespace {

  StagePlan plan(std::uint64_t stages,
                 std::optional<std::uint64_t> cap  = {},
                 Reenumeration                mode = Reenumeration::every_subset) {
    StagePlan p;
    p.stages     = stages;
    p.subset_cap = cap;
    p.mode       = mode;
    return p;
  }

  // Lazy stages must coincide with the eager construction, names included.
  void compare_with_eager(Structure const& seed, StagePlan const& p) {
    auto L = LazyLimit::over(seed, p);
    for (std::uint64_t n = 0; n <= p.stages; ++n) {
      auto eager = eager_stage(seed, p, n);
      auto lazy  = L->stage_structure(n);
      CHECK(lazy.vertices() == eager.vertices());
      CHECK(lazy == eager);
      CHECK(L->size_up_to(n) == eager.size());
    }
  }

  Structure bipartite_path() {
    return Structure::bipartite(fx::letters(3),
                                {{fx::v("a"), 0}, {fx::v("b"), 1}, {fx::v("c"), 0}},
                                {{fx::v("a"), fx::v("b")}, {fx::v("b"), fx::v("c")}});
  }

  Structure arc() {
    return Structure::digraph(fx::letters(2), {{fx::v("a"), fx::v("b")}});
  }

}  // namespace

TEST_CASE("ultimately periodic sets") {
  auto S = UltimatelyPeriodicSet::parse("2,4|6:3:0,1");
  for (std::uint64_t n : {2, 4, 6, 7, 9, 10, 12}) {
    CHECK(S.contains(n));
  }
  for (std::uint64_t n : {0, 1, 3, 5, 8, 11}) {
    CHECK_FALSE(S.contains(n));
  }
  for (std::uint64_t n = 0; n < 30; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
      count += S.contains(k);
    }
    CHECK(S.count_below(n) == count);
  }
  CHECK(UltimatelyPeriodicSet::parse("2,3").contains(3));
  CHECK_FALSE(UltimatelyPeriodicSet::parse("2,3").contains(300));
  CHECK_THROWS_AS(UltimatelyPeriodicSet::parse("2,4|6:0:1"), Error);
}

TEST_CASE("witness stages over K2") {
  auto L = LazyLimit::over(fx::k2(), plan(2));
  CHECK(L->stage_count(1) == 4);
  CHECK(L->size_up_to(1) == 6);
  auto s1 = L->stage_structure(1);
  CHECK(s1.size() == 6);
  CHECK(s1.edge_count() == 5);
  CHECK(L->size_up_to(2) == 70);
  CHECK(L->stage_count(2) == 64);
  // the witness of {a} is w1.1, of {b} w1.2 and of {a,b} w1.3
  CHECK(L->item(VertexName::witness(1, 3)).members == fx::letters(2));
  CHECK(L->adjacent(VertexName::witness(1, 1), fx::v("a")));
  CHECK_FALSE(L->adjacent(VertexName::witness(1, 1), fx::v("b")));
  CHECK(L->stage_of(VertexName::witness(2, 5)) == 2);
  CHECK_FALSE(L->contains(VertexName::witness(3, 0)));
  CHECK_FALSE(L->contains(VertexName::witness(2, 64)));
}

TEST_CASE("stage counts follow the operator's subset counts") {
  // graphs: all subsets; digraphs: every member labelled out, in or both;
  // bipartite: subsets of each part
  auto g = LazyLimit::over(fx::path(3), plan(1));
  CHECK(g->stage_count(1) == 8);
  auto d = LazyLimit::over(arc(), plan(1));
  CHECK(d->stage_count(1) == 16);
  auto b = LazyLimit::over(bipartite_path(), plan(1));
  CHECK(b->stage_count(1) == 4 + 2);
  auto capped = LazyLimit::over(fx::path(3), plan(1, 1));
  CHECK(capped->stage_count(1) == 4);
}

TEST_CASE("lazy stages agree with eager construction") {
  compare_with_eager(fx::k2(), plan(2));
  compare_with_eager(fx::k2(), plan(2, {}, Reenumeration::fresh_only));
  compare_with_eager(fx::path(3), plan(2, 2));
  compare_with_eager(fx::path(3), plan(2, 1, Reenumeration::fresh_only));
  compare_with_eager(arc(), plan(1));
  compare_with_eager(arc(), plan(2, 1));
  compare_with_eager(bipartite_path(), plan(2, 2));
  compare_with_eager(fx::k11(), plan(2));
  StagePlan mixed = plan(3, 2);
  mixed.stage_caps[3] = 1;
  compare_with_eager(fx::k2(), mixed);
}

TEST_CASE("astronomically large stages are rejected") {
  CHECK_THROWS_AS(LazyLimit::over(fx::k2(), plan(3)), CapExceeded);
  // capped stages stay small enough to rank
  auto L = LazyLimit::over(fx::k2(), plan(5, 2));
  CHECK(L->stage_count(5) > (std::uint64_t(1) << 32));
  auto w = VertexName::witness(5, L->stage_count(5) - 1);
  CHECK(L->contains(w));
  CHECK(L->item(w).members.size() == 2);
}

TEST_CASE("items are in size-then-lexicographic order") {
  auto L    = LazyLimit::over(fx::path(3), plan(2, 2));
  auto prev = L->item(VertexName::witness(2, 0));
  for (std::uint64_t i = 1; i < L->stage_count(2); ++i) {
    auto it = L->item(VertexName::witness(2, i));
    bool ordered = prev.members.size() < it.members.size()
                   || (prev.members.size() == it.members.size() && prev.members < it.members);
    CHECK(ordered);
    prev = it;
  }
}

TEST_CASE("witness_for inverts item") {
  for (auto const& seed : {fx::k2(), arc(), bipartite_path()}) {
    auto L = LazyLimit::over(seed, plan(2, 2));
    for (std::uint64_t s = 1; s <= 2; ++s) {
      for (std::uint64_t i = 0; i < L->stage_count(s); ++i) {
        auto w = VertexName::witness(s, i);
        auto back = L->witness_for(s, L->item(w));
        REQUIRE(back);
        CHECK(*back == w);
      }
    }
  }
}

TEST_CASE("nth_item and count_items agree with filtering") {
  auto check = [](std::shared_ptr<LazyLimit const> const& L,
                  std::uint64_t                          s,
                  int                                    part,
                  std::vector<Constraint> const&         req,
                  std::vector<VertexName> const&         forb) {
    std::vector<VertexName> expected;
    for (std::uint64_t i = 0; i < L->stage_count(s); ++i) {
      auto w  = VertexName::witness(L->offset() + s, i);
      auto it = L->item(w);
      if (it.part != part) {
        continue;
      }
      bool ok = true;
      for (auto const& c : req) {
        auto pos = std::find(it.members.begin(), it.members.end(), c.v);
        ok       = ok && pos != it.members.end()
             && (c.mask & label_bit(it.labels[pos - it.members.begin()]));
      }
      for (auto const& f : forb) {
        ok = ok && std::find(it.members.begin(), it.members.end(), f) == it.members.end();
      }
      if (ok) {
        expected.push_back(w);
      }
    }
    CHECK(L->count_items(s, part, req, forb) == expected.size());
    for (std::uint64_t j = 0; j <= expected.size(); ++j) {
      auto got = L->nth_item(s, part, req, forb, j);
      if (j < expected.size()) {
        REQUIRE(got);
        CHECK(*got == expected[j]);
      } else {
        CHECK_FALSE(got);
      }
    }
  };

  auto a = fx::v("a"), b = fx::v("b"), c = fx::v("c");
  auto w11 = VertexName::witness(1, 1);

  auto G = LazyLimit::over(fx::path(3), plan(2, 3));
  check(G, 1, 0, {}, {});
  check(G, 1, 0, {{a, label_bit(0)}}, {});
  check(G, 1, 0, {{a, label_bit(0)}, {c, label_bit(0)}}, {b});
  check(G, 2, 0, {{w11, label_bit(0)}}, {a});
  check(G, 2, 0, {{b, label_bit(0)}, {w11, label_bit(0)}}, {c, VertexName::witness(1, 2)});

  auto F = LazyLimit::over(fx::path(3), plan(2, 2, Reenumeration::fresh_only));
  check(F, 2, 0, {}, {});
  check(F, 2, 0, {{a, label_bit(0)}}, {});
  check(F, 2, 0, {}, {VertexName::witness(1, 0)});

  auto D = LazyLimit::over(arc(), plan(2, 2));
  check(D, 1, 0, {{a, label_bit(arc_out)}}, {});
  check(D, 1, 0, {{a, label_bit(arc_in) | label_bit(arc_both)}}, {b});
  check(D, 2, 0, {{w11, label_bit(arc_both)}, {a, kAnyLabel}}, {});

  auto B = LazyLimit::over(bipartite_path(), plan(2, 2));
  for (int part : {0, 1}) {
    check(B, 1, part, {}, {});
    check(B, 1, part, {{a, label_bit(0)}}, {});
    check(B, 2, part, {{b, label_bit(0)}}, {});
    check(B, 2, part, {}, {a, b});
  }
}

TEST_CASE("extension witnesses realise the requested type minimally") {
  auto L     = LazyLimit::over(fx::path(3), plan(2, 3));
  auto pool  = L->vertices_up_to(1);
  auto all   = L->vertices_up_to(2);
  auto works = [&](VertexName const& w, std::vector<VertexName> const& U,
                   std::vector<VertexName> const& V) {
    if (std::find(U.begin(), U.end(), w) != U.end()
        || std::find(V.begin(), V.end(), w) != V.end()) {
      return false;
    }
    for (auto const& u : U) {
      if (!L->adjacent(w, u)) {
        return false;
      }
    }
    for (auto const& v : V) {
      if (L->adjacent(w, v)) {
        return false;
      }
    }
    return true;
  };
  // every disjoint U, V inside the first four stage-1 vertices, |U|,|V| <= 2
  std::vector<VertexName> small(pool.begin(), pool.begin() + 5);
  std::size_t             checked = 0;
  for (std::uint64_t code = 0; code < 243; ++code) {  // 3^5 assignments
    std::vector<VertexName> U, V;
    std::uint64_t           c = code;
    for (auto const& x : small) {
      if (c % 3 == 1) {
        U.push_back(x);
      } else if (c % 3 == 2) {
        V.push_back(x);
      }
      c /= 3;
    }
    if (U.size() > 3) {
      continue;
    }
    auto w = find_ec_witness(*L, U, V);
    CHECK(works(w, U, V));
    for (auto const& x : all) {
      if (x < w) {
        CHECK_FALSE(works(x, U, V));
      }
    }
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("digraph and bipartite extension witnesses") {
  auto D = LazyLimit::over(arc(), plan(2, 2));
  auto a = fx::v("a"), b = fx::v("b");
  for (auto const& type : {DigraphType{{a}, {b}, {}, {}}, DigraphType{{}, {}, {a, b}, {}},
                           DigraphType{{}, {a}, {}, {b}}, DigraphType{{}, {}, {}, {a, b}}}) {
    auto w = find_ec_witness(*D, type);
    for (auto const& x : type.out) {
      CHECK((D->adjacent(w, x) && !D->adjacent(x, w)));
    }
    for (auto const& x : type.in) {
      CHECK((D->adjacent(x, w) && !D->adjacent(w, x)));
    }
    for (auto const& x : type.both) {
      CHECK((D->adjacent(x, w) && D->adjacent(w, x)));
    }
    for (auto const& x : type.none) {
      CHECK((!D->adjacent(x, w) && !D->adjacent(w, x)));
    }
  }
  auto B = LazyLimit::over(bipartite_path(), plan(2, 2));
  auto w = find_ec_witness_bipartite(*B, 1, {a}, {fx::v("c")});
  CHECK(B->part(w) == 1);
  CHECK(B->adjacent(w, a));
  CHECK_FALSE(B->adjacent(w, fx::v("c")));
}

TEST_CASE("missing coverage is reported") {
  auto L = LazyLimit::over(fx::k2(), plan(1));
  auto w = VertexName::witness(1, 0);
  CHECK_THROWS_AS(find_ec_witness(*L, {w}, {}), CoverageError);
}

TEST_CASE("delta oracle matches the finite construction") {
  auto g = fx::complete(3);
  for (auto const& text : {"2", "2,4", "3"}) {
    auto S      = UltimatelyPeriodicSet::parse(text);
    auto oracle = lazy_delta(g, S);
    auto finite = delta_construction(g, IndexSet::parse(text), 8);
    for (std::size_t i = 0; i < finite.size(); ++i) {
      for (std::size_t j = 0; j < finite.size(); ++j) {
        CHECK(oracle->adjacent(finite.vertex(i), finite.vertex(j)) == finite.adjacent(i, j));
      }
    }
    // enumeration order: g, then l_0, (v_0), l_1, ...
    CHECK(oracle->vertex(0) == fx::v("a"));
    CHECK(oracle->vertex(3) == path_vertex(0));
    for (std::uint64_t i = 0; i < 12; ++i) {
      CHECK(oracle->position(oracle->vertex(i)) == i);
    }
    // witnesses are common neighbours
    std::vector<VertexName> A{fx::v("a"), path_vertex(1), path_vertex(3)};
    for (std::uint64_t j = 0; j < 4; ++j) {
      auto w = oracle->witness(A, j);
      for (auto const& x : A) {
        CHECK(oracle->adjacent(w, x));
      }
    }
  }
}

TEST_CASE("limits over an oracle window") {
  auto oracle = lazy_delta(fx::complete(3), UltimatelyPeriodicSet::parse("2"));
  StagePlan p = plan(2, 2);
  auto L      = LazyLimit::over(oracle, 6, p);
  CHECK(L->seed().size() == 6);
  CHECK(L->size_up_to(1) == 6 + L->stage_count(1));
  // oracle vertices outside the window are still stage 0
  CHECK(L->contains(path_vertex(40)));
  CHECK(L->stage_of(path_vertex(40)) == 0);
  CHECK(L->adjacent(fx::v("a"), path_vertex(40)));
  auto s1 = L->vertices_up_to(1);
  for (auto const& w : s1) {
    if (!w.is_witness()) {
      continue;
    }
    auto it = L->item(w);
    for (auto const& x : L->seed().vertices()) {
      bool member = std::find(it.members.begin(), it.members.end(), x) != it.members.end();
      CHECK(L->adjacent(w, x) == member);
    }
  }
}

TEST_CASE("limits answer concurrently and consistently") {
  auto L     = LazyLimit::over(fx::k2(), plan(2));
  auto verts = L->vertices_up_to(2);
  std::vector<std::vector<char>> results(4);
  std::vector<std::thread>       threads;
  for (std::size_t t = 0; t < 4; ++t) {
    threads.emplace_back([&, t]() {
      for (auto const& u : verts) {
        for (auto const& v : verts) {
          results[t].push_back(L->adjacent(u, v));
        }
      }
    });
  }
  for (auto& th : threads) {
    th.join();
  }
  for (std::size_t t = 1; t < 4; ++t) {
    CHECK(results[t] == results[0]);
  }
}
