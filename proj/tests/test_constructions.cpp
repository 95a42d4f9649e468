#include "doctest.h"

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "forge/constructions.hpp"
#include "forge/errors.hpp"

using namespace forge;

namespace {

  struct CaptureWarnings {
    std::vector<std::string> messages;
    CaptureWarnings() {
      set_warning_handler([this](std::string const& m) { messages.push_back(m); });
    }
    ~CaptureWarnings() {
      set_warning_handler({});
    }
  };

  std::size_t aut(Structure const& g) {
    return count_automorphisms(g, 24);
  }

}  // namespace

TEST_CASE("index sets parse comma lists") {
  CHECK(IndexSet::parse("2,4,5") == IndexSet{2, 4, 5});
  CHECK(IndexSet::parse("5,2,4,2") == IndexSet{2, 4, 5});
  CHECK(IndexSet::parse("").empty());
  CHECK(IndexSet::parse("2,4,5").to_string() == "{2,4,5}");
  CHECK_THROWS_AS(IndexSet::parse("1,2"), Error);
  CHECK_THROWS_AS(IndexSet::parse("0"), Error);
  CHECK_THROWS_AS(IndexSet::parse("2,x"), ParseError);
  CHECK(IndexSet{2, 3}.shifted(2) == IndexSet{4, 5});
  CHECK(IndexSet{2}.subset_of(IndexSet{2, 3}));
  CHECK_FALSE(IndexSet{4}.subset_of(IndexSet{2, 3}));
}

TEST_CASE("L_S is a path with pendants") {
  auto L = build_L(IndexSet{2, 4, 5}, 6);
  CHECK(L.size() == 10);
  CHECK(L.edge_count() == 9);
  for (std::uint64_t n = 0; n <= 6; ++n) {
    CHECK(L.contains(path_vertex(n)));
  }
  for (std::uint64_t n : {2, 4, 5}) {
    CHECK(L.adjacent(path_vertex(n), pendant_vertex(n)));
    CHECK(L.degree(L.index_of(pendant_vertex(n))) == 1);
  }
  CHECK_FALSE(L.contains(pendant_vertex(3)));
  CHECK(components(L).size() == 1);
}

TEST_CASE("L_S warns about indices beyond the truncation") {
  CaptureWarnings w;
  auto            L = build_L(IndexSet{2, 9}, 4);
  CHECK(L.size() == 6);
  CHECK(w.messages.size() == 1);
}

TEST_CASE("L_S size formula") {
  for (std::uint64_t N = 2; N <= 8; ++N) {
    for (auto const& S : {IndexSet{}, IndexSet{2}, IndexSet{2, 3}, IndexSet{3, 5, 7}}) {
      CaptureWarnings w;
      std::uint64_t   pendants = 0;
      for (auto n : S.values()) {
        pendants += n <= N;
      }
      auto L = build_L(S, N);
      CHECK(L.size() == N + 1 + pendants);
      CHECK(L.edge_count() == N + pendants);
      auto D = build_L_directed(S, N);
      CHECK(D.kind() == Kind::digraph);
      CHECK(D.edge_count() == 2 * (N + pendants));
    }
  }
}

TEST_CASE("automorphisms of L_S") {
  CHECK(aut(build_L(IndexSet{2}, 4)) == 2);  // reversal swaps l_2's two arms
  CHECK(aut(build_L(IndexSet{2}, 5)) == 1);
  CHECK(aut(build_L(IndexSet{2, 4}, 6)) == 2);
  CHECK(aut(build_L(IndexSet{2, 3}, 6)) == 1);
  CHECK(oracle::automorphisms(build_L(IndexSet{2}, 5)) == 1);
  CHECK(oracle::automorphisms(build_L(IndexSet{2}, 4)) == 2);
  CHECK(isomorphic(build_L(IndexSet{2, 4}, 4), build_L(IndexSet{3, 4}, 4)));
}

TEST_CASE("Lambda_S places path vertices by parity") {
  auto B = build_Lambda(IndexSet{2, 3}, 5);
  CHECK(B.kind() == Kind::bipartite);
  for (std::uint64_t n = 0; n <= 5; ++n) {
    CHECK(B.part(path_vertex(n)) == int(n % 2));
  }
  CHECK(B.part(pendant_vertex(2)) == 1);
  CHECK(B.part(pendant_vertex(3)) == 0);
  for (auto const& [u, w] : B.edges()) {
    CHECK(B.part(u) != B.part(w));
  }
}

TEST_CASE("M_S joins apexes to everything") {
  for (std::uint64_t K = 1; K <= 3; ++K) {
    auto L = build_L(IndexSet{2}, 4);
    auto M = build_M(IndexSet{2}, 4, K);
    CHECK(M.size() == L.size() + K);
    CHECK(M.edge_count() == L.edge_count() + K * L.size() + K * (K - 1) / 2);
    for (std::uint64_t i = 0; i < K; ++i) {
      CHECK(M.degree(M.index_of(apex_vertex(i))) == M.size() - 1);
    }
  }
  CHECK_THROWS_AS(build_M(IndexSet{2}, 4, 0), PreconditionError);
  CHECK(aut(build_M(IndexSet{2}, 4, 3)) == 12);  // 2 on L times 3! on the apexes
}

TEST_CASE("N_S joins apexes across the parts") {
  for (std::uint64_t K = 1; K <= 2; ++K) {
    auto        B  = build_Lambda(IndexSet{2}, 4);
    auto        N  = build_N(IndexSet{2}, 4, K);
    std::size_t p0 = 0;
    for (std::size_t i = 0; i < B.size(); ++i) {
      p0 += B.part(i) == 0;
    }
    std::size_t p1 = B.size() - p0;
    CHECK(N.size() == B.size() + 2 * K);
    CHECK(N.edge_count() == B.edge_count() + K * p1 + K * p0 + K * K);
    for (auto const& [u, w] : N.edges()) {
      CHECK(N.part(u) != N.part(w));
    }
  }
  CHECK(aut(build_N(IndexSet{2}, 4, 2)) == 24);
}

TEST_CASE("dashv gadget shape") {
  auto D = fx::complete_digraph(3);
  auto G = dashv(D);
  CHECK(G.kind() == Kind::graph);
  CHECK(G.size() == 3 + 3 * 6);
  CHECK(G.edge_count() == 4 * 6);
  CHECK(aut(G) == 6);

  auto C = Structure::digraph(fx::letters(3), {{fx::v("a"), fx::v("b")},
                                               {fx::v("b"), fx::v("c")},
                                               {fx::v("c"), fx::v("a")}});
  auto H = dashv(C);
  CHECK(H.size() == 12);
  CHECK(count_automorphisms(C) == 3);
  // a reflection of the underlying 12-cycle-with-pendants appears
  CHECK(aut(H) == 6);
}

TEST_CASE("dashv transfers automorphism groups on small digraphs") {
  // original vertices of degree at least 3 cannot trade places with
  // gadget vertices
  for (std::size_t n = 3; n <= 4; ++n) {
    auto D = fx::complete_digraph(n);
    CHECK(count_automorphisms(dashv(D), 64) == count_automorphisms(D));
  }
  // with two vertices the gadget is a 6-cycle with two pendants, and a
  // reflection sends a and b to gadget vertices
  CHECK(aut(dashv(fx::complete_digraph(2))) == 4);
}

TEST_CASE("prime gadget") {
  auto P = prime(fx::complete(4));
  CHECK(P.kind() == Kind::bipartite);
  CHECK(P.size() == 10);
  CHECK(P.edge_count() == 12);
  CHECK(aut(P) == 24);
  auto T = prime(fx::complete(3));
  CHECK(T.size() == 6);
  CHECK(oracle::automorphisms(T) == 12);  // the 6-cycle: parts may swap
  CHECK(aut(T) == 12);
}

TEST_CASE("blowup of K2 is K_{2,2}") {
  auto B   = blowup(fx::k2(), 2);
  auto c4  = Structure::graph(fx::letters(4), {{fx::v("a"), fx::v("c")},
                                               {fx::v("a"), fx::v("d")},
                                               {fx::v("b"), fx::v("c")},
                                               {fx::v("b"), fx::v("d")}});
  CHECK(isomorphic(B, c4));
  std::uint64_t r = 0;
  CHECK(blowup_base(B, &r) == fx::letters(2));
  CHECK(r == 2);
}

TEST_CASE("phi_b is idempotent and psi_b an involutive automorphism") {
  for (auto const& g : {fx::k2(), fx::path(3), fx::complete(3)}) {
    auto        B = blowup(g, 2);
    std::size_t n = g.size();
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << n); ++code) {
      std::vector<std::uint64_t> b(n);
      for (std::size_t i = 0; i < n; ++i) {
        b[i] = (code >> i) & 1U;
      }
      auto phi = phi_b(B, b);
      auto psi = psi_b(B, b);
      CHECK(is_homomorphism(B, B, phi));
      CHECK(then(phi, phi) == phi);
      CHECK(is_embedding(B, B, psi));
      CHECK(then(psi, psi) == identity_map(B));
    }
  }
}

TEST_CASE("the diagonal of a blowup induces the base") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& g : oracle::all_graphs(n)) {
      auto B = blowup(g, 2);
      for (std::uint64_t code = 0; code < (std::uint64_t(1) << n); ++code) {
        std::vector<std::uint64_t> b(n);
        for (std::size_t i = 0; i < n; ++i) {
          b[i] = (code >> i) & 1U;
        }
        CHECK(oracle::isomorphisms(induced(B, diagonal(B, b)), g) > 0);
      }
    }
  }
}

TEST_CASE("delta construction") {
  auto D = delta_construction(fx::complete(3), IndexSet{2}, 4);
  CHECK(D.size() == 3 + 6);
  // the complement of K3 + L: Aut is Aut(K3) times Aut(L_{2}, 4)
  CHECK(aut(D) == 12);
  CHECK(complement(D).edge_count() == 3 + 5);
  for (auto const& S : {IndexSet{2}, IndexSet{4}, IndexSet{2, 3}, IndexSet{3, 4}}) {
    CHECK(aut(delta_construction(fx::complete(3), S, 6)) == 6);
  }
  for (auto const& S : {IndexSet{3}, IndexSet{2, 4}, IndexSet{2, 3, 4}, IndexSet{}}) {
    CHECK(aut(delta_construction(fx::complete(3), S, 6)) == 12);
  }
}

TEST_CASE("delta construction wraps colliding names") {
  auto g = Structure::graph({path_vertex(0), fx::v("a")}, {{path_vertex(0), fx::v("a")}});
  auto D = delta_construction(g, IndexSet{2}, 3);
  CHECK(D.size() == 2 + 5);
}

TEST_CASE("translation maps are embeddings") {
  for (std::uint64_t k = 0; k <= 3; ++k) {
    auto S = IndexSet{2, 4};
    auto m = translate_map(S, 5, k);
    CHECK(is_embedding(build_L(S, 5), build_L(S.shifted(k), 5 + k), m));
  }
}

TEST_CASE("witness pair over K2") {
  SchutzCaps caps;
  caps.subset_cap = 2;
  auto p          = schutz_pair(fx::k2(), {IndexSet{2}}, 1, caps);
  CHECK(p.e_star.size() == 12);
  CHECK(p.x_vertices.size() == 1);
  CHECK(p.x_vertices[0].size() == 4);
  std::set<NamePair> zero;
  for (auto const& e : p.e_zero.edges()) {
    zero.insert(e);
  }
  for (auto const& e : p.e_star.edges()) {
    CHECK(zero.count(e) == 1);
  }
  auto star = p.e_star.edges();
  CHECK(star == std::vector<NamePair>{{fx::v("a"), VertexName::witness(1, 1)},
                                      {fx::v("a"), VertexName::witness(1, 3)},
                                      {fx::v("b"), VertexName::witness(1, 2)},
                                      {fx::v("b"), VertexName::witness(1, 3)}});
  auto c     = complement(p.e_zero);
  auto comps = components(c);
  REQUIRE(comps.size() == 2);
  CHECK(isomorphic(induced(c, comps[0]), fx::k2()));
  CHECK(isomorphic(induced(c, comps[1]), build_M(IndexSet{2}, 4, 4), 16));
}
