#include "doctest.h"

#include <thread>

#include "fixtures.hpp"

#include "forge/constructions.hpp"
#include "forge/endomorphism.hpp"
#include "forge/errors.hpp"

using namespace forge;

namespace {

  StagePlan plan(std::uint64_t stages, std::optional<std::uint64_t> cap = {}) {
    StagePlan p;
    p.stages     = stages;
    p.subset_cap = cap;
    return p;
  }

  VertexName w(std::uint64_t s, std::uint64_t i) {
    return VertexName::witness(s, i);
  }

  VertexMap identity_on(Structure const& g) {
    return identity_map(g);
  }

  std::size_t kernel_classes(PartialHom const& h) {
    return kernel(h.domain, h.map).size();
  }

  // The Delta limit used for idempotent tests: window K3 + l_0, l_1, l_2.
  std::shared_ptr<LazyLimit const> delta_limit() {
    StagePlan p = plan(2);
    p.stage_caps[2] = 2;
    return LazyLimit::over(lazy_delta(fx::complete(3), UltimatelyPeriodicSet::parse("2")), 6, p);
  }

}  // namespace

TEST_CASE("choice sequences") {
  auto c = ChoiceSequence::parse("0,1,0");
  CHECK(c(1, 0, 0) == 0);
  CHECK(c(1, 1, 1) == 1);
  CHECK(c(1, 5, 5) == 0);
  auto p = ChoiceSequence::parse("periodic:0,2");
  CHECK(p(1, 0, 3) == 2);
  CHECK(p(2, 0, 4) == 0);
  auto k = ChoiceSequence::parse("3;1.0=1");
  CHECK(k(1, 0, 0) == 1);
  CHECK(k(1, 1, 1) == 3);
  for (auto const& text : {"3", "0,1,0", "periodic:0,1", "2;1.4=0;2.0=5"}) {
    auto again = ChoiceSequence::parse(ChoiceSequence::parse(text).to_string());
    for (std::uint64_t s = 1; s <= 2; ++s) {
      for (std::uint64_t i = 0; i < 6; ++i) {
        CHECK(again(s, i, i + 3 * s) == ChoiceSequence::parse(text)(s, i, i + 3 * s));
      }
    }
  }
  CHECK_THROWS_AS(ChoiceSequence::parse("1,x"), ParseError);
  CHECK_THROWS_AS(ChoiceSequence::parse("1;2=3"), ParseError);
  CHECK_THROWS_AS(ChoiceSequence::periodic({}), PreconditionError);
}

TEST_CASE("non-strict extension of the identity on K2") {
  auto L = LazyLimit::over(fx::k2(), plan(2));
  auto e = extend_hom(L, identity_on(fx::k2()), ChoiceSequence::constant(0), false);
  CHECK(e(fx::v("a")) == fx::v("a"));
  CHECK(e(w(1, 0)) == fx::v("a"));
  CHECK(e(w(1, 1)) == fx::v("b"));
  CHECK(e(w(1, 2)) == fx::v("a"));
  CHECK(e(w(1, 3)) == w(1, 3));
  auto h = restrict(e, 1);
  CHECK(h.domain.size() == 6);
  CHECK(check_homomorphism(h));
}

TEST_CASE("strict extension also respects same-stage witnesses") {
  auto L = LazyLimit::over(fx::k2(), plan(2));
  auto e = extend_hom(L, identity_on(fx::k2()), ChoiceSequence::constant(0), true);
  CHECK(e(w(1, 0)) == fx::v("a"));
  CHECK(e(w(1, 1)) == fx::v("b"));
  CHECK(e(w(1, 2)) == w(1, 3));
  CHECK(e(w(1, 3)) == w(2, 25));
  CHECK(check_homomorphism(restrict(e, 1)));
  // the images of stage-2 witnesses need a third stage
  CHECK_THROWS_AS(restrict(e, 2), CoverageError);
}

TEST_CASE("different choices give different homomorphisms") {
  StagePlan p = plan(3);
  p.stage_caps[3] = 8;
  auto L  = LazyLimit::over(fx::k2(), p);
  auto e0 = extend_hom(L, identity_on(fx::k2()), ChoiceSequence::constant(0), false);
  auto e1 = extend_hom(L, identity_on(fx::k2()), ChoiceSequence::constant(1), false);
  auto h0 = restrict(e0, 2);
  auto h1 = restrict(e1, 2);
  CHECK(check_homomorphism(h0));
  CHECK(check_homomorphism(h1));
  CHECK(e1(w(1, 0)) == fx::v("b"));
  CHECK_FALSE(h0.map == h1.map);
}

TEST_CASE("generic extensions are homomorphisms on several seeds") {
  auto bip = Structure::bipartite(fx::letters(3),
                                  {{fx::v("a"), 0}, {fx::v("b"), 1}, {fx::v("c"), 0}},
                                  {{fx::v("a"), fx::v("b")}, {fx::v("b"), fx::v("c")}});
  auto arc = Structure::digraph(fx::letters(2), {{fx::v("a"), fx::v("b")}});
  for (auto const& seed : {fx::k2(), fx::path(3), bip, arc}) {
    auto L = LazyLimit::over(seed, plan(2, 2));
    for (auto const& choices : {ChoiceSequence::constant(0), ChoiceSequence::parse("periodic:0,1"),
                                ChoiceSequence::parse("1,0,2")}) {
      auto e = extend_hom(L, identity_on(seed), choices, false);
      auto h = restrict(e, 1);
      CHECK(check_homomorphism(h));
      for (auto const& v : seed.vertices()) {
        CHECK(e(v) == v);
      }
    }
  }
}

TEST_CASE("seed rules and seed map validation") {
  auto L    = LazyLimit::over(fx::path(3), plan(2, 2));
  SeedRule fold = [](VertexName const& v) {
    return v == fx::v("c") ? fx::v("a") : v;
  };
  auto e = extend_hom(L, fold, ChoiceSequence::constant(0), false);
  CHECK(e(fx::v("c")) == fx::v("a"));
  CHECK(check_homomorphism(restrict(e, 1)));
  VertexMap bad;
  bad.set(fx::v("a"), fx::v("a"));
  bad.set(fx::v("b"), fx::v("c"));
  bad.set(fx::v("c"), fx::v("c"));
  CHECK_THROWS_AS(extend_hom(L, bad), PreconditionError);
}

TEST_CASE("automorphism lifts") {
  auto      L = LazyLimit::over(fx::k2(), plan(2));
  VertexMap swap;
  swap.set(fx::v("a"), fx::v("b"));
  swap.set(fx::v("b"), fx::v("a"));
  auto g = extend_automorphism(L, swap);
  auto h = restrict(g, 2);
  CHECK(check_embedding(h));
  // the lift permutes every stage
  std::set<VertexName> image;
  for (auto const& [from, to] : h.map.assignment()) {
    CHECK(L->stage_of(to) == L->stage_of(from));
    image.insert(to);
  }
  CHECK(image.size() == h.domain.size());
  // an involution lifts to an involution
  auto gg = compose(g, g);
  for (auto const& v : h.domain.vertices()) {
    CHECK(gg(v) == v);
  }
  VertexMap collapse;
  collapse.set(fx::v("a"), fx::v("a"));
  collapse.set(fx::v("b"), fx::v("a"));
  CHECK_THROWS_AS(extend_automorphism(L, collapse), PreconditionError);
}

TEST_CASE("composition applies the first map first") {
  auto      L = LazyLimit::over(fx::k2(), plan(2));
  VertexMap swap;
  swap.set(fx::v("a"), fx::v("b"));
  swap.set(fx::v("b"), fx::v("a"));
  auto g = extend_automorphism(L, swap);
  auto e = extend_hom(L, identity_on(fx::k2()), ChoiceSequence::constant(0), false);
  auto c = compose(g, e);
  for (auto const& v : L->vertices_up_to(1)) {
    CHECK(c(v) == e(g(v)));
  }
  CHECK(c.mode() == ExtensionMode::composite);
}

TEST_CASE("idempotents onto the Delta structure") {
  auto L  = delta_limit();
  CHECK(L->size_up_to(1) == 70);
  CHECK(L->size_up_to(2) == 2556);
  auto c0 = ChoiceSequence::constant(0);
  auto c1 = ChoiceSequence::constant(0).override_at(1, 0, 1);
  auto e0 = idempotent_onto(L, c0);
  auto e1 = idempotent_onto(L, c1);
  auto r0 = verify_idempotent(e0, 2);
  auto r1 = verify_idempotent(e1, 2);
  CHECK(r0.ok);
  CHECK(r1.ok);
  CHECK(r0.checked == 2556);
  auto h0 = restrict(e0, 2);
  auto h1 = restrict(e1, 2);
  CHECK(check_homomorphism(h0));
  CHECK(check_homomorphism(h1));
  auto oracle = L->oracle();
  for (auto const& [from, to] : h0.map.assignment()) {
    CHECK(oracle->contains(to));
    if (oracle->contains(from)) {
      CHECK(to == from);
    }
  }
  CHECK(kernel_classes(h0) == 2490);
  CHECK(kernel_classes(h1) == 2553);
}

TEST_CASE("image-preserving extension into K_{1,1} is forced") {
  auto k11    = fx::k11();
  auto L      = LazyLimit::over(k11, plan(2));
  auto target = std::make_shared<FiniteOracle const>(k11);
  auto e      = extend_hom_image_preserving(L, identity_on(k11), target);
  auto h      = restrict(e, 2);
  CHECK(check_homomorphism(h));
  for (auto const& v : h.domain.vertices()) {
    CHECK(e(v) == (L->part(v) == 0 ? fx::v("a") : fx::v("b")));
  }
  auto other = extend_hom_image_preserving(L, identity_on(k11), target,
                                           ChoiceSequence::constant(1));
  CHECK_THROWS_WITH_AS(other(w(1, 0)), doctest::Contains("K_{1,1}"), PreconditionError);
}

TEST_CASE("endomorphisms evaluate consistently across threads") {
  StagePlan p = plan(3);
  p.stage_caps[3] = 8;
  auto L     = LazyLimit::over(fx::k2(), p);
  auto e     = extend_hom(L, identity_on(fx::k2()), ChoiceSequence::constant(1), false);
  auto verts = L->vertices_up_to(2);
  std::vector<std::vector<VertexName>> results(4);
  std::vector<std::thread>             threads;
  for (std::size_t t = 0; t < 4; ++t) {
    threads.emplace_back([&, t]() {
      for (std::size_t i = 0; i < verts.size(); ++i) {
        auto const& v = verts[(i * (t + 1)) % verts.size()];
        results[t].push_back(e(v));
      }
    });
  }
  for (auto& th : threads) {
    th.join();
  }
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      CHECK(results[t][i] == e(verts[(i * (t + 1)) % verts.size()]));
    }
  }
}

TEST_CASE("greedy injective map into the witness pair limit") {
  SchutzCaps caps;
  caps.subset_cap = 2;
  SchutzTarget target(schutz_pair(fx::k2(), {IndexSet{2}}, 1, caps), plan(2, 6));
  CHECK(target.adjacent_star(fx::v("a"), w(1, 1)));
  CHECK_FALSE(target.adjacent_star(fx::v("a"), fx::v("b")));
  CHECK(target.adjacent_zero(fx::v("a"), fx::v("b")) == false);
  CHECK(target.adjacent_zero(fx::v("a"), w(1, 0)));

  auto source = LazyLimit::over(fx::k2(), plan(1))->stage_structure(1);
  auto result = greedy_injective_hom(source, target, VertexMap{});
  CHECK(result.hom.domain.size() == 6);
  CHECK(is_injective(result.hom.map));
  CHECK(check_homomorphism(result.hom));
  // E_0 relates images of some non-adjacent pair
  CHECK(result.discrepancy.has_value());
  for (auto const& u : source.vertices()) {
    for (auto const& v : source.vertices()) {
      if (u < v) {
        CHECK(source.adjacent(u, v)
              == target.adjacent_star(result.hom.map(u), result.hom.map(v)));
      }
    }
  }
}
