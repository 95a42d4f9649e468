#include "doctest.h"

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "forge/errors.hpp"
#include "forge/green.hpp"

using namespace forge;

namespace {

  using T = std::vector<std::size_t>;

  T then(T const& f, T const& g) {
    T out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      out[i] = g[f[i]];
    }
    return out;
  }

  // Green relations straight from the ideals of an explicit element list.
  struct Ideals {
    std::vector<std::set<T>> left, right, two;

    explicit Ideals(std::vector<T> const& els) {
      for (auto const& f : els) {
        std::set<T> l, r, j;
        for (auto const& h : els) {
          l.insert(then(h, f));
          r.insert(then(f, h));
          for (auto const& k : els) {
            j.insert(then(then(h, f), k));
          }
        }
        left.push_back(l);
        right.push_back(r);
        two.push_back(j);
      }
    }

    bool L(std::size_t a, std::size_t b) const {
      return left[a] == left[b];
    }
    bool R(std::size_t a, std::size_t b) const {
      return right[a] == right[b];
    }
    bool D(std::size_t a, std::size_t b) const {
      for (std::size_t c = 0; c < left.size(); ++c) {
        if (L(a, c) && R(c, b)) {
          return true;
        }
      }
      return false;
    }
    bool J(std::size_t a, std::size_t b) const {
      return two[a] == two[b];
    }
  };

  std::vector<T> widen(std::vector<Transformation> const& els) {
    std::vector<T> out;
    for (auto const& t : els) {
      out.emplace_back(t.begin(), t.end());
    }
    return out;
  }

  // Each class label first appears at its least member, in increasing order.
  bool numbered_by_least(std::vector<std::size_t> const& labels) {
    std::size_t next = 0;
    for (auto c : labels) {
      if (c > next) {
        return false;
      }
      next += c == next;
    }
    return true;
  }

  void check_against_ideals(Structure const& g) {
    auto           M  = enumerate_endos(g);
    auto           G  = green_relations(M);
    auto           els = widen(M.elements());
    Ideals         I(els);
    std::size_t const n = M.size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        CHECK((G.L[a] == G.L[b]) == I.L(a, b));
        CHECK((G.R[a] == G.R[b]) == I.R(a, b));
        CHECK((G.H[a] == G.H[b]) == (I.L(a, b) && I.R(a, b)));
        CHECK((G.D[a] == G.D[b]) == I.D(a, b));
        CHECK((G.J[a] == G.J[b]) == I.J(a, b));
      }
      CHECK(G.idempotent[a] == (then(els[a], els[a]) == els[a]));
      bool regular = false;
      for (auto const& h : els) {
        regular = regular || then(then(els[a], h), els[a]) == els[a];
      }
      CHECK(G.regular[a] == regular);
      if (auto w = G.regular_witness[a]) {
        CHECK(M.product(M.product(a, *w), a) == a);
      }
    }
    for (auto const* rel : {&G.L, &G.R, &G.H, &G.D, &G.J}) {
      CHECK(numbered_by_least(*rel));
    }
  }

}  // namespace

TEST_CASE("endomorphism enumeration matches the odometer") {
  CHECK(enumerate_endos(fx::k2()).size() == 2);
  CHECK(enumerate_endos(fx::edgeless(2)).size() == 4);
  CHECK(enumerate_endos(fx::path(3)).size() == 6);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto const& g : oracle::all_graphs(n)) {
      CHECK(widen(enumerate_homomorphisms(g, g)) == oracle::homomorphisms(g, g));
    }
  }
  for (auto const& d : oracle::all_digraphs(3)) {
    CHECK(widen(enumerate_homomorphisms(d, d)) == oracle::homomorphisms(d, d));
  }
  for (auto const& b : oracle::all_bipartite(2, 2)) {
    CHECK(widen(enumerate_homomorphisms(b, b)) == oracle::homomorphisms(b, b));
  }
  auto g = oracle::all_graphs(3);
  for (auto const& dom : g) {
    for (auto const& cod : g) {
      CHECK(widen(enumerate_homomorphisms(dom, cod)) == oracle::homomorphisms(dom, cod));
    }
  }
  CHECK(homomorphisms(fx::path(3), fx::k2()).size() == 2);
  CHECK_THROWS_AS(enumerate_endos(fx::edgeless(4), 3), CapExceeded);
}

TEST_CASE("monoid construction checks identity and closure") {
  auto g = fx::edgeless(2);
  CHECK(FiniteMonoid(g, {{0, 1}, {0, 0}, {0, 1}}).size() == 2);
  CHECK_THROWS_AS(FiniteMonoid(g, {{0, 0}}), PreconditionError);
  // const 0 then swap is const 1, which is missing
  CHECK_THROWS_AS(FiniteMonoid(g, {{0, 1}, {1, 0}, {0, 0}}), PreconditionError);
  CHECK_THROWS_AS(FiniteMonoid(g, {{0, 1}, {0, 2}}), PreconditionError);
  CHECK_THROWS_AS(FiniteMonoid(g, {{0, 1}, {0, 0}, {1, 1}}, 2), CapExceeded);
}

TEST_CASE("products compose left to right") {
  auto M = enumerate_endos(fx::edgeless(3));
  CHECK(M.size() == 27);
  for (std::size_t f = 0; f < M.size(); ++f) {
    CHECK(M.product(f, M.identity()) == f);
    CHECK(M.product(M.identity(), f) == f);
    for (std::size_t g = 0; g < M.size(); ++g) {
      T fg = then(T(M.element(f).begin(), M.element(f).end()),
                  T(M.element(g).begin(), M.element(g).end()));
      CHECK(widen({M.element(M.product(f, g))})[0] == fg);
    }
    CHECK(M.index_of(M.as_map(f)) == f);
  }
}

TEST_CASE("Green relations agree with ideal membership") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto const& g : oracle::all_graphs(n)) {
      check_against_ideals(g);
    }
  }
  for (auto const& d : oracle::all_digraphs(3)) {
    check_against_ideals(d);
  }
  for (auto const& b : oracle::all_bipartite(2, 2)) {
    check_against_ideals(b);
  }
  check_against_ideals(fx::path(4));
}

TEST_CASE("full transformation monoids") {
  auto M2 = enumerate_endos(fx::edgeless(2));
  auto G2 = green_relations(M2);
  CHECK(G2.D_count == 2);
  CHECK(std::all_of(G2.regular.begin(), G2.regular.end(), [](bool b) { return b; }));

  auto M3 = enumerate_endos(fx::edgeless(3));
  auto G3 = green_relations(M3);
  CHECK(G3.D_count == 3);
  CHECK(G3.J_count == 3);
  CHECK(idempotents(M3).size() == 10);
  for (auto e : idempotents(M3)) {
    auto group = maximal_subgroup(M3, e);
    std::size_t const expected[] = {0, 1, 2, 6};
    CHECK(group.order() == expected[M3.rank(e)]);
  }
}

TEST_CASE("a core has a group as its monoid") {
  auto M = enumerate_endos(fx::complete(3));
  auto G = green_relations(M);
  CHECK(M.size() == 6);
  CHECK(G.H_count == 1);
  CHECK(G.D_count == 1);
  auto S = schutzenberger(M, G, 0);
  CHECK(S.order() == 6);
  CHECK(S.is_group());
  using P = std::vector<std::size_t>;
  CHECK(S.cycle_profile()
        == std::vector<P>{P{1, 1, 1, 1, 1, 1}, P{2, 2, 2}, P{2, 2, 2}, P{2, 2, 2}, P{3, 3},
                          P{3, 3}});
}

TEST_CASE("End of a path on three vertices") {
  auto M = enumerate_endos(fx::path(3));
  auto G = green_relations(M);
  CHECK(G.D_count == 2);
  CHECK(G.L_count == 3);
  CHECK(G.R_count == 2);
  CHECK(G.H_count == 3);
  CHECK(verify_monoid_claims(M, G).ok());
}

TEST_CASE("maximal subgroups match automorphisms of the image") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& g : oracle::all_graphs(n)) {
      auto M = enumerate_endos(g);
      for (auto e : idempotents(M)) {
        auto img = image_subgraph(g, g, M.as_map(e));
        CHECK(maximal_subgroup(M, e).order() == count_automorphisms(img.induced));
      }
    }
  }
  auto M = enumerate_endos(fx::path(3));
  auto G = green_relations(M);
  for (std::size_t f = 0; f < M.size(); ++f) {
    if (!G.idempotent[f]) {
      CHECK_THROWS_AS(maximal_subgroup(M, f), PreconditionError);
    }
  }
}

TEST_CASE("Schutzenberger groups are constant on D-classes") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& g : oracle::all_graphs(n)) {
      auto M = enumerate_endos(g);
      auto G = green_relations(M);
      std::map<std::size_t, std::size_t> order;
      for (std::size_t f = 0; f < M.size(); ++f) {
        auto S = schutzenberger(M, G, f);
        CHECK(S.is_group());
        CHECK(S.order() <= S.h_class.size());
        auto [it, fresh] = order.emplace(G.D[f], S.order());
        CHECK(it->second == S.order());
        if (G.idempotent[f]) {
          CHECK(S.order() == S.h_class.size());
        }
      }
    }
  }
}

TEST_CASE("monoid claims hold on every small structure") {
  auto check = [](Structure const& s) {
    auto report = verify_monoid_claims(s);
    for (auto const& c : report.claims) {
      INFO(c.name);
      CHECK_FALSE(c.counterexample.has_value());
    }
  };
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& g : oracle::all_graphs(n)) {
      check(g);
    }
  }
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto const& d : oracle::all_digraphs(n)) {
      check(d);
    }
  }
  for (auto const& b : oracle::all_bipartite(2, 2)) {
    check(b);
  }
  for (auto const& b : oracle::all_bipartite(1, 3)) {
    check(b);
  }
  check(fx::path(5));
}

TEST_CASE("homomorphisms of connected bipartite graphs onto K_{1,1}") {
  auto k11 = fx::k11();
  for (std::size_t p = 1; p <= 5; ++p) {
    for (std::size_t q = 1; p + q <= 6; ++q) {
      for (auto const& b : oracle::all_bipartite(p, q)) {
        if (components(b).size() != 1) {
          continue;
        }
        auto homs = enumerate_homomorphisms(b, k11);
        CHECK(homs.size() == 2);
        for (auto const& h : homs) {
          for (std::size_t i = 0; i < b.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
              CHECK((h[i] == h[j]) == (b.part(i) == b.part(j)));
            }
          }
        }
      }
    }
  }
}
