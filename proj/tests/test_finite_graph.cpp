#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "forge/errors.hpp"
#include "forge/io.hpp"
#include "forge/structure.hpp"

using namespace forge;

TEST_CASE("vertex names print and parse back") {
  std::vector<VertexName> names{
      VertexName::seed(3),
      VertexName::named("a"),
      VertexName::witness(2, 15),
      VertexName::gadget("l", 4),
      VertexName::gadget("x", 0, {VertexName::named("a"), VertexName::named("b")}),
      VertexName::gadget("l", 1, {VertexName::gadget("L", 0)}),
  };
  for (auto const& v : names) {
    CHECK(VertexName::parse(v.to_string()) == v);
  }
  CHECK(VertexName::witness(2, 15).to_string() == "w2.15");
  CHECK_THROWS_AS(VertexName::parse("w2."), ParseError);
  CHECK_THROWS_AS(VertexName::parse(""), ParseError);
}

TEST_CASE("vertex names order by stage, then flavour") {
  auto a  = VertexName::named("a");
  auto g  = VertexName::gadget("l", 0);
  auto w1 = VertexName::witness(1, 7);
  auto w2 = VertexName::witness(2, 0);
  CHECK(a < g);
  CHECK(g < w1);
  CHECK(w1 < w2);
  CHECK(VertexName::witness(1, 2) < VertexName::witness(1, 10));
}

TEST_CASE("graph basics") {
  auto p = fx::path(4);
  CHECK(p.size() == 4);
  CHECK(p.edge_count() == 3);
  CHECK(p.degree(p.index_of(fx::v("b"))) == 2);
  CHECK(p.adjacent(fx::v("a"), fx::v("b")));
  CHECK_FALSE(p.adjacent(fx::v("a"), fx::v("c")));
  CHECK_THROWS_AS(p.index_of(fx::v("z")), PreconditionError);
  CHECK_THROWS_AS(Structure::graph({fx::v("a")}, {{fx::v("a"), fx::v("a")}}), PreconditionError);
}

TEST_CASE("complement is an involution and swaps edges and non-edges") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& g : oracle::all_graphs(n)) {
      auto c = complement(g);
      CHECK(complement(c) == g);
      CHECK(g.edge_count() + c.edge_count() == n * (n - 1) / 2);
    }
  }
  for (auto const& d : oracle::all_digraphs(3)) {
    CHECK(complement(complement(d)) == d);
    CHECK(d.edge_count() + complement(d).edge_count() == 6);
  }
}

TEST_CASE("bipartite complement keeps parts") {
  for (auto const& b : oracle::all_bipartite(2, 2)) {
    auto c = bipartite_complement(b);
    CHECK(c.edge_count() + b.edge_count() == 4);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(c.part(i) == b.part(i));
    }
    CHECK(bipartite_complement(c) == b);
  }
}

TEST_CASE("disjoint union sizes") {
  auto u = disjoint_union(fx::k2(), oracle::all_graphs(3).back());
  CHECK(u.size() == 5);
  CHECK(u.edge_count() == 4);  // K2 and K3
  CHECK(components(u).size() == 2);
}

TEST_CASE("automorphism counts agree with a permutation oracle") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& g : oracle::all_graphs(n)) {
      CHECK(count_automorphisms(g) == oracle::automorphisms(g));
    }
  }
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto const& d : oracle::all_digraphs(n)) {
      CHECK(count_automorphisms(d) == oracle::automorphisms(d));
    }
  }
  for (auto const& b : oracle::all_bipartite(2, 2)) {
    CHECK(count_automorphisms(b) == oracle::automorphisms(b));
  }
  for (auto const& b : oracle::all_bipartite(1, 3)) {
    CHECK(count_automorphisms(b) == oracle::automorphisms(b));
  }
}

TEST_CASE("automorphisms are sorted, distinct and valid") {
  auto g    = fx::complete(4);
  auto auts = automorphisms(g);
  CHECK(auts.size() == 24);
  for (std::size_t i = 0; i + 1 < auts.size(); ++i) {
    CHECK(auts[i].assignment() < auts[i + 1].assignment());
  }
  for (auto const& a : auts) {
    CHECK(is_embedding(g, g, a));
  }
  CHECK_THROWS_AS(count_automorphisms(fx::edgeless(5), 4), CapExceeded);
}

TEST_CASE("isomorphism agrees with the oracle on random pairs") {
  std::mt19937 rng(7);
  auto         graphs = oracle::all_graphs(4);
  for (int k = 0; k < 300; ++k) {
    auto const& g = graphs[rng() % graphs.size()];
    auto const& h = graphs[rng() % graphs.size()];
    CHECK(isomorphic(g, h) == (oracle::isomorphisms(g, h) > 0));
    if (auto m = isomorphism(g, h)) {
      CHECK(is_embedding(g, h, *m));
    }
  }
}

TEST_CASE("homomorphism checks agree with the oracle") {
  auto graphs = oracle::all_graphs(3);
  for (auto const& g : graphs) {
    for (auto const& h : graphs) {
      auto homs = oracle::homomorphisms(g, h);
      // count maps passing is_homomorphism
      std::size_t count = 0;
      for (std::size_t code = 0; code < 27; ++code) {
        VertexMap m;
        std::size_t c = code;
        for (std::size_t i = 0; i < 3; ++i) {
          m.set(g.vertex(i), h.vertex(c % 3));
          c /= 3;
        }
        count += is_homomorphism(g, h, m);
      }
      CHECK(count == homs.size());
    }
  }
}

TEST_CASE("homomorphisms of bipartite graphs respect the partition relation") {
  auto b = fx::k11();
  VertexMap collapse;
  collapse.set(fx::v("a"), fx::v("a"));
  collapse.set(fx::v("b"), fx::v("a"));
  CHECK_FALSE(is_homomorphism(b, b, collapse));
  auto e = Structure::bipartite({fx::v("a"), fx::v("b")}, {{fx::v("a"), 0}, {fx::v("b"), 1}},
                                {});
  // collapsing the parts of an edgeless bipartite graph is allowed
  CHECK(is_homomorphism(e, e, collapse));
  VertexMap split;
  split.set(fx::v("a"), fx::v("a"));
  split.set(fx::v("b"), fx::v("b"));
  auto same = Structure::bipartite({fx::v("a"), fx::v("b")},
                                   {{fx::v("a"), 0}, {fx::v("b"), 0}}, {});
  CHECK_FALSE(is_homomorphism(same, e, split));
}

TEST_CASE("kernel and image of a fold") {
  auto      p = fx::path(3);
  VertexMap fold;
  fold.set(fx::v("a"), fx::v("a"));
  fold.set(fx::v("b"), fx::v("b"));
  fold.set(fx::v("c"), fx::v("a"));
  CHECK(is_homomorphism(p, p, fold));
  auto ker = kernel(p, fold);
  REQUIRE(ker.size() == 2);
  CHECK(ker[0] == std::vector<VertexName>{fx::v("a"), fx::v("c")});
  CHECK(ker[1] == std::vector<VertexName>{fx::v("b")});
  auto img = image_subgraph(p, p, fold);
  CHECK(img.vertices == std::vector<VertexName>{fx::v("a"), fx::v("b")});
  CHECK(img.equal);
}

TEST_CASE("relation image can be smaller than the induced image") {
  // map the edgeless pair onto an edge
  auto      dom = fx::edgeless(2);
  auto      cod = fx::k2();
  VertexMap id;
  id.set(fx::v("a"), fx::v("a"));
  id.set(fx::v("b"), fx::v("b"));
  auto img = image_subgraph(dom, cod, id);
  CHECK(img.relation_image.empty());
  CHECK(img.induced.edge_count() == 1);
  CHECK_FALSE(img.equal);
}

TEST_CASE("ac_check finds the least failing subset") {
  auto k4 = fx::complete(4);
  auto r  = ac_check(k4);
  CHECK_FALSE(r.ok);
  CHECK(r.failing_subset.size() == 4);
  AcOptions capped;
  capped.subset_cap = 3;
  CHECK(ac_check(k4, capped).ok);
  auto p = fx::path(3);
  auto q = ac_check(p);
  CHECK_FALSE(q.ok);
  // every singleton has a neighbour; a and b have none in common
  CHECK(q.failing_subset == std::vector<VertexName>{fx::v("a"), fx::v("b")});
  CHECK(q.witnesses == 0);
}

TEST_CASE("JSON round trips") {
  auto check = [](Structure const& s) {
    auto j = to_json(s);
    CHECK(structure_from_json(j) == s);
    CHECK(structure_from_json(parse_json(j.dump())) == s);
  };
  for (auto const& g : oracle::all_graphs(3)) {
    check(g);
  }
  for (auto const& d : oracle::all_digraphs(3)) {
    check(d);
  }
  for (auto const& b : oracle::all_bipartite(2, 2)) {
    check(b);
  }
  VertexMap m;
  m.set(fx::v("a"), VertexName::witness(1, 3));
  CHECK(map_from_json(to_json(m)) == m);
  CHECK_THROWS_AS(parse_json("{oops"), ParseError);
  CHECK_THROWS_AS(structure_from_json(parse_json("[1,2]")), ParseError);
  CHECK_THROWS_AS(structure_from_json(parse_json(R"({"kind":"graph","vertices":["a"],
      "edges":[["a","z"]]})")),
                  Error);
}

TEST_CASE("DOT export mentions every vertex") {
  auto dot = to_dot(fx::path(3));
  for (auto const& name : {"\"a\"", "\"b\"", "\"c\""}) {
    CHECK(dot.find(name) != std::string::npos);
  }
}
