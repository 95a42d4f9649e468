#include "forge/green.hpp"

#include <algorithm>  // for sort, unique, lower_bound, next_permutation
#include <map>        // for map
#include <numeric>    // for iota
#include <stdexcept>  // for logic_error
#include <utility>    // for move

#include "forge/errors.hpp"  // for PreconditionError, CapExceeded

namespace forge {

  namespace {

    // Fixed-width bitset over monoid elements.
    class Bits {
     public:
      explicit Bits(std::size_t n = 0) : _w((n + 63) / 64, 0) {}
      void set(std::size_t i) {
        _w[i / 64] |= std::uint64_t(1) << (i % 64);
      }
      bool test(std::size_t i) const {
        return (_w[i / 64] >> (i % 64)) & 1U;
      }
      Bits& operator|=(Bits const& o) {
        for (std::size_t k = 0; k < _w.size(); ++k) {
          _w[k] |= o._w[k];
        }
        return *this;
      }
      bool operator==(Bits const&) const = default;

     private:
      std::vector<std::uint64_t> _w;
    };

    // Numbers classes by least element, given a same-class test against
    // earlier elements.
    template <typename Same>
    std::size_t number_classes(std::size_t n, std::vector<std::size_t>& out, Same same) {
      out.assign(n, SIZE_MAX);
      std::size_t count = 0;
      for (std::size_t f = 0; f < n; ++f) {
        if (out[f] != SIZE_MAX) {
          continue;
        }
        out[f] = count;
        for (std::size_t g = f + 1; g < n; ++g) {
          if (out[g] == SIZE_MAX && same(f, g)) {
            out[g] = count;
          }
        }
        ++count;
      }
      return count;
    }

    std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x         = parent[x];
      }
      return x;
    }

    BitMatrix partition_relation(Structure const& g) {
      BitMatrix p(g.size());
      if (g.kind() != Kind::bipartite) {
        return p;
      }
      for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
          p.set(i, j, g.same_part(i, j));
        }
      }
      return p;
    }

    // The relations of the structure: E, and P for bipartite graphs.
    std::vector<BitMatrix> relations(Structure const& g) {
      std::vector<BitMatrix> rels{g.matrix()};
      if (g.kind() == Kind::bipartite) {
        rels.push_back(partition_relation(g));
      }
      return rels;
    }

    // The relation image of rel under t.
    BitMatrix image_relation(BitMatrix const& rel, Transformation const& t) {
      BitMatrix out(rel.size());
      for (std::size_t i = 0; i < rel.size(); ++i) {
        for (std::size_t j = 0; j < rel.size(); ++j) {
          if (rel.get(i, j)) {
            out.set(t[i], t[j]);
          }
        }
      }
      return out;
    }

    BitMatrix restricted(BitMatrix const& rel, std::vector<std::uint32_t> const& set) {
      BitMatrix out(rel.size());
      for (auto x : set) {
        for (auto y : set) {
          out.set(x, y, rel.get(x, y));
        }
      }
      return out;
    }

    // Whether pi (defined on set) maps rel restricted to set into itself.
    bool preserves(BitMatrix const&                  rel,
                   std::vector<std::uint32_t> const& set,
                   Transformation const&             pi) {
      for (auto x : set) {
        for (auto y : set) {
          if (rel.get(x, y) && !rel.get(pi[x], pi[y])) {
            return false;
          }
        }
      }
      return true;
    }

    // Whether t permutes set.
    bool permutes(Transformation const& t, std::vector<std::uint32_t> const& set) {
      std::vector<std::uint32_t> img;
      img.reserve(set.size());
      for (auto x : set) {
        img.push_back(t[x]);
      }
      std::sort(img.begin(), img.end());
      return img == set;
    }

    // All permutations of set preserving every relation, as transformations
    // of the whole vertex set fixing everything outside set.
    std::vector<Transformation> set_automorphisms(std::vector<BitMatrix> const&     rels,
                                                  std::vector<std::uint32_t> const& set,
                                                  std::size_t                       n) {
      std::vector<Transformation> out;
      auto                        perm = set;
      do {
        Transformation t(n);
        std::iota(t.begin(), t.end(), 0U);
        for (std::size_t k = 0; k < set.size(); ++k) {
          t[set[k]] = perm[k];
        }
        bool ok = true;
        for (auto const& r : rels) {
          ok = ok && preserves(r, set, t);
        }
        if (ok) {
          out.push_back(std::move(t));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      return out;
    }

    // Whether the substructures induced on a and b are isomorphic.
    bool induced_isomorphic(std::vector<BitMatrix> const&     rels,
                            std::vector<std::uint32_t> const& a,
                            std::vector<std::uint32_t> const& b) {
      if (a.size() != b.size()) {
        return false;
      }
      auto perm = b;
      do {
        bool ok = true;
        for (auto const& r : rels) {
          for (std::size_t i = 0; ok && i < a.size(); ++i) {
            for (std::size_t j = 0; ok && j < a.size(); ++j) {
              ok = r.get(a[i], a[j]) == r.get(perm[i], perm[j]);
            }
          }
        }
        if (ok) {
          return true;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      return false;
    }

    std::string describe(FiniteMonoid const& M, std::size_t f) {
      std::string out = "[";
      auto const& t   = M.element(f);
      for (std::size_t i = 0; i < t.size(); ++i) {
        out += (i ? "," : "") + M.structure().vertex(i).to_string() + "->"
               + M.structure().vertex(t[i]).to_string();
      }
      return out + "]";
    }

    std::string describe_pair(FiniteMonoid const& M, std::size_t f, std::size_t g) {
      return describe(M, f) + " and " + describe(M, g);
    }

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // FiniteMonoid
  ////////////////////////////////////////////////////////////////////////

  FiniteMonoid::FiniteMonoid(Structure                   g,
                             std::vector<Transformation> elements,
                             std::size_t                 element_cap)
      : _g(std::move(g)), _elements(std::move(elements)) {
    std::size_t const n = _g.size();
    for (auto const& t : _elements) {
      if (t.size() != n) {
        throw PreconditionError("transformation of length " + std::to_string(t.size())
                                + " on a structure with " + std::to_string(n)
                                + " vertices");
      }
      for (auto x : t) {
        if (x >= n) {
          throw PreconditionError("transformation value out of range");
        }
      }
    }
    std::sort(_elements.begin(), _elements.end());
    _elements.erase(std::unique(_elements.begin(), _elements.end()), _elements.end());
    std::size_t const m = _elements.size();
    if (m > element_cap || m > 65535) {
      throw CapExceeded("monoid has " + std::to_string(m) + " elements, more than the cap "
                        + std::to_string(element_cap));
    }
    Transformation id(n);
    std::iota(id.begin(), id.end(), 0U);
    auto idx = find(id);
    if (!idx) {
      throw PreconditionError("monoid elements do not contain the identity");
    }
    _identity = *idx;
    _table.resize(m * m);
    Transformation h(n);
    for (std::size_t f = 0; f < m; ++f) {
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          h[i] = _elements[k][_elements[f][i]];
        }
        auto p = find(h);
        if (!p) {
          throw PreconditionError("monoid elements are not closed under composition");
        }
        _table[f * m + k] = static_cast<std::uint16_t>(*p);
      }
    }
  }

  std::optional<std::size_t> FiniteMonoid::find(Transformation const& t) const {
    auto it = std::lower_bound(_elements.begin(), _elements.end(), t);
    if (it == _elements.end() || *it != t) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - _elements.begin());
  }

  std::size_t FiniteMonoid::index_of(VertexMap const& m) const {
    Transformation t(_g.size());
    for (std::size_t i = 0; i < _g.size(); ++i) {
      t[i] = static_cast<std::uint32_t>(_g.index_of(m(_g.vertex(i))));
    }
    auto idx = find(t);
    if (!idx) {
      throw PreconditionError("map is not an element of the monoid");
    }
    return *idx;
  }

  VertexMap FiniteMonoid::as_map(std::size_t i) const {
    VertexMap m;
    auto const& t = element(i);
    for (std::size_t k = 0; k < t.size(); ++k) {
      m.set(_g.vertex(k), _g.vertex(t[k]));
    }
    return m;
  }

  std::vector<std::uint32_t> FiniteMonoid::image(std::size_t i) const {
    auto img = element(i);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    return img;
  }

  std::vector<std::uint32_t> FiniteMonoid::kernel_labels(std::size_t i) const {
    auto const&                          t = element(i);
    std::map<std::uint32_t, std::uint32_t> label;
    std::vector<std::uint32_t>           out;
    out.reserve(t.size());
    for (auto x : t) {
      auto [it, _] = label.emplace(x, static_cast<std::uint32_t>(label.size()));
      out.push_back(it->second);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Enumeration
  ////////////////////////////////////////////////////////////////////////

  std::vector<Transformation> enumerate_homomorphisms(Structure const& dom,
                                                      Structure const& cod,
                                                      std::size_t      vertex_cap) {
    if (dom.kind() != cod.kind()) {
      throw PreconditionError("homomorphisms between a " + to_string(dom.kind()) + " and a "
                              + to_string(cod.kind()));
    }
    if (dom.size() > vertex_cap) {
      throw CapExceeded("enumeration over " + std::to_string(dom.size())
                        + " vertices exceeds the cap " + std::to_string(vertex_cap));
    }
    std::size_t const           n   = dom.size();
    std::size_t const           m   = cod.size();
    bool const                  bip = dom.kind() == Kind::bipartite;
    std::vector<Transformation> out;
    if (n == 0) {
      out.emplace_back();
      return out;
    }
    if (m == 0) {
      return out;
    }
    Transformation t(n, 0);
    auto fits = [&](std::size_t i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (dom.adjacent(i, j) && !cod.adjacent(t[i], t[j])) {
          return false;
        }
        if (dom.adjacent(j, i) && !cod.adjacent(t[j], t[i])) {
          return false;
        }
        if (bip && dom.same_part(i, j) && !cod.same_part(t[i], t[j])) {
          return false;
        }
      }
      return true;
    };
    std::size_t i = 0;
    t[0]          = 0;
    while (true) {
      if (t[i] < m && fits(i)) {
        if (i + 1 == n) {
          out.push_back(t);
          ++t[i];
        } else {
          t[++i] = 0;
        }
        continue;
      }
      if (t[i] < m) {
        ++t[i];
        continue;
      }
      if (i == 0) {
        break;
      }
      ++t[--i];
    }
    return out;
  }

  std::vector<VertexMap> homomorphisms(Structure const& dom,
                                       Structure const& cod,
                                       std::size_t      vertex_cap) {
    std::vector<VertexMap> out;
    for (auto const& t : enumerate_homomorphisms(dom, cod, vertex_cap)) {
      VertexMap m;
      for (std::size_t i = 0; i < t.size(); ++i) {
        m.set(dom.vertex(i), cod.vertex(t[i]));
      }
      out.push_back(std::move(m));
    }
    return out;
  }

  FiniteMonoid enumerate_endos(Structure const& g, std::size_t vertex_cap) {
    auto endos = enumerate_homomorphisms(g, g, vertex_cap);
    if (endos.size() > kMonoidCap) {
      throw CapExceeded("End has " + std::to_string(endos.size())
                        + " elements, more than the monoid cap " + std::to_string(kMonoidCap));
    }
    return FiniteMonoid(g, std::move(endos));
  }

  ////////////////////////////////////////////////////////////////////////
  // Green's relations
  ////////////////////////////////////////////////////////////////////////

  std::vector<std::size_t> GreenData::members(std::vector<std::size_t> const& relation,
                                              std::size_t                     cls) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < relation.size(); ++f) {
      if (relation[f] == cls) {
        out.push_back(f);
      }
    }
    return out;
  }

  GreenData green_relations(FiniteMonoid const& M) {
    std::size_t const n = M.size();
    std::vector<Bits> left(n, Bits(n)), right(n, Bits(n));
    for (std::size_t f = 0; f < n; ++f) {
      for (std::size_t h = 0; h < n; ++h) {
        left[f].set(M.product(h, f));
        right[f].set(M.product(f, h));
      }
    }
    GreenData G;
    // mutual membership in the one-sided ideals
    G.L_count = number_classes(n, G.L, [&](std::size_t f, std::size_t g) {
      return left[f].test(g) && left[g].test(f);
    });
    G.R_count = number_classes(n, G.R, [&](std::size_t f, std::size_t g) {
      return right[f].test(g) && right[g].test(f);
    });
    G.H_count = number_classes(n, G.H, [&](std::size_t f, std::size_t g) {
      return G.L[f] == G.L[g] && G.R[f] == G.R[g];
    });

    std::vector<std::size_t> parent(n), first_l(G.L_count, SIZE_MAX),
        first_r(G.R_count, SIZE_MAX);
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t f = 0; f < n; ++f) {
      for (auto [first, cls] : {std::pair{&first_l, G.L[f]}, std::pair{&first_r, G.R[f]}}) {
        if ((*first)[cls] == SIZE_MAX) {
          (*first)[cls] = f;
        } else {
          parent[find_root(parent, f)] = find_root(parent, (*first)[cls]);
        }
      }
    }
    std::vector<std::size_t> roots(n);
    for (std::size_t f = 0; f < n; ++f) {
      roots[f] = find_root(parent, f);
    }
    G.D_count = number_classes(n, G.D, [&](std::size_t f, std::size_t g) {
      return roots[f] == roots[g];
    });

    std::vector<Bits> two_sided(n, Bits(n));
    for (std::size_t f = 0; f < n; ++f) {
      for (std::size_t x = 0; x < n; ++x) {
        if (left[f].test(x)) {
          two_sided[f] |= right[x];
        }
      }
    }
    G.J_count = number_classes(n, G.J, [&](std::size_t f, std::size_t g) {
      return two_sided[f].test(g) && two_sided[g].test(f);
    });

    G.idempotent.resize(n);
    G.regular.resize(n);
    G.regular_witness.resize(n);
    for (std::size_t f = 0; f < n; ++f) {
      G.idempotent[f]      = M.product(f, f) == f;
      G.regular_witness[f] = is_regular(M, f);
      G.regular[f]         = G.regular_witness[f].has_value();
    }
    return G;
  }

  std::vector<std::size_t> idempotents(FiniteMonoid const& M) {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < M.size(); ++f) {
      if (M.product(f, f) == f) {
        out.push_back(f);
      }
    }
    return out;
  }

  std::optional<std::size_t> is_regular(FiniteMonoid const& M, std::size_t f) {
    if (M.product(f, f) == f) {
      return f;
    }
    for (std::size_t g = 0; g < M.size(); ++g) {
      if (M.product(M.product(f, g), f) == f) {
        return g;
      }
    }
    return std::nullopt;
  }

  GroupTable maximal_subgroup(FiniteMonoid const& M, std::size_t e) {
    if (M.product(e, e) != e) {
      throw PreconditionError("element " + describe(M, e) + " is not idempotent");
    }
    std::size_t const n = M.size();
    auto in_left = [&](std::size_t x, std::size_t f) {  // x in Mf
      for (std::size_t h = 0; h < n; ++h) {
        if (M.product(h, f) == x) {
          return true;
        }
      }
      return false;
    };
    auto in_right = [&](std::size_t x, std::size_t f) {  // x in fM
      for (std::size_t h = 0; h < n; ++h) {
        if (M.product(f, h) == x) {
          return true;
        }
      }
      return false;
    };
    GroupTable group;
    for (std::size_t h = 0; h < n; ++h) {
      if (in_left(h, e) && in_left(e, h) && in_right(h, e) && in_right(e, h)) {
        group.elements.push_back(h);
      }
    }
    std::size_t const k = group.order();
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < k; ++i) {
      local[group.elements[i]] = i;
    }
    group.identity = local.at(e);
    group.table.resize(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        auto it = local.find(M.product(group.elements[i], group.elements[j]));
        if (it == local.end()) {
          throw std::logic_error("H-class of an idempotent is not closed");
        }
        group.table[i * k + j] = it->second;
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      bool has_inverse = false;
      for (std::size_t j = 0; j < k; ++j) {
        has_inverse = has_inverse
                      || (group.table[i * k + j] == group.identity
                          && group.table[j * k + i] == group.identity);
      }
      if (group.table[i * k + group.identity] != i || !has_inverse) {
        throw std::logic_error("H-class of an idempotent is not a group");
      }
    }
    return group;
  }

  ////////////////////////////////////////////////////////////////////////
  // Schützenberger groups
  ////////////////////////////////////////////////////////////////////////

  bool SchutzGroup::is_group() const {
    std::size_t const k = h_class.size();
    Permutation       id(k);
    std::iota(id.begin(), id.end(), 0);
    if (!std::binary_search(permutations.begin(), permutations.end(), id)) {
      return false;
    }
    for (auto const& p : permutations) {
      auto sorted = p;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != id) {
        return false;
      }
      for (auto const& q : permutations) {
        Permutation pq(k);
        for (std::size_t i = 0; i < k; ++i) {
          pq[i] = q[p[i]];
        }
        if (!std::binary_search(permutations.begin(), permutations.end(), pq)) {
          return false;
        }
      }
    }
    return true;
  }

  std::vector<std::vector<std::size_t>> SchutzGroup::cycle_profile() const {
    std::vector<std::vector<std::size_t>> out;
    for (auto const& p : permutations) {
      std::vector<bool>        seen(p.size());
      std::vector<std::size_t> lengths;
      for (std::size_t i = 0; i < p.size(); ++i) {
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = p[j]) {
          seen[j] = true;
          ++len;
        }
        if (len) {
          lengths.push_back(len);
        }
      }
      std::sort(lengths.begin(), lengths.end());
      out.push_back(std::move(lengths));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  SchutzGroup schutzenberger(FiniteMonoid const& M, GreenData const& G, std::size_t f) {
    SchutzGroup S;
    S.h_class = G.members(G.H, G.H.at(f));
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < S.h_class.size(); ++i) {
      local[S.h_class[i]] = i;
    }
    std::vector<Permutation> gammas;
    for (std::size_t t = 0; t < M.size(); ++t) {
      Permutation gamma;
      for (auto h : S.h_class) {
        auto it = local.find(M.product(h, t));
        if (it == local.end()) {
          break;
        }
        gamma.push_back(it->second);
      }
      if (gamma.size() == S.h_class.size()) {
        S.stabiliser.push_back(t);
        gammas.push_back(std::move(gamma));
      }
    }
    S.permutations = gammas;
    std::sort(S.permutations.begin(), S.permutations.end());
    S.permutations.erase(std::unique(S.permutations.begin(), S.permutations.end()),
                         S.permutations.end());
    for (auto const& g : gammas) {
      S.gamma_of.push_back(static_cast<std::size_t>(
          std::lower_bound(S.permutations.begin(), S.permutations.end(), g)
          - S.permutations.begin()));
    }
    return S;
  }

  ////////////////////////////////////////////////////////////////////////
  // Claim verification
  ////////////////////////////////////////////////////////////////////////

  bool ClaimReport::ok() const {
    return std::all_of(claims.begin(), claims.end(), [](ClaimResult const& c) {
      return !c.counterexample;
    });
  }

  ClaimReport verify_monoid_claims(Structure const& g, std::size_t vertex_cap) {
    auto M = enumerate_endos(g, vertex_cap);
    return verify_monoid_claims(M, green_relations(M));
  }

  ClaimReport verify_monoid_claims(FiniteMonoid const& M, GreenData const& G) {
    Structure const&  g    = M.structure();
    std::size_t const n    = M.size();
    std::size_t const v    = g.size();
    auto const        rels = relations(g);

    std::vector<std::vector<std::uint32_t>> image(n), kernel(n);
    for (std::size_t f = 0; f < n; ++f) {
      image[f]  = M.image(f);
      kernel[f] = M.kernel_labels(f);
    }
    // isomorphism type of the induced image, numbered by first occurrence
    std::vector<std::size_t>                iso(n);
    std::vector<std::vector<std::uint32_t>> types;
    std::map<std::vector<std::uint32_t>, std::size_t> by_set;
    for (std::size_t f = 0; f < n; ++f) {
      auto it = by_set.find(image[f]);
      if (it == by_set.end()) {
        std::size_t t = 0;
        while (t < types.size() && !induced_isomorphic(rels, types[t], image[f])) {
          ++t;
        }
        if (t == types.size()) {
          types.push_back(image[f]);
        }
        it = by_set.emplace(image[f], t).first;
      }
      iso[f] = it->second;
    }
    // relation images, one per relation
    std::vector<std::vector<BitMatrix>> rel_image(n);
    for (std::size_t f = 0; f < n; ++f) {
      for (auto const& r : rels) {
        rel_image[f].push_back(image_relation(r, M.element(f)));
      }
    }

    ClaimReport report;
    report.monoid_size = n;
    auto add = [&](std::string name) -> ClaimResult& {
      report.claims.push_back(ClaimResult{std::move(name), 0, std::nullopt});
      return report.claims.back();
    };
    auto fail = [](ClaimResult& c, std::string const& what) {
      if (!c.counterexample) {
        c.counterexample = what;
      }
    };

    {
      auto& c = add("Green's relations are consistent (H = L meet R, D within J, "
                    "idempotents regular, regularity constant on D-classes)");
      std::vector<std::optional<bool>> d_regular(G.D_count);
      for (std::size_t f = 0; f < n; ++f) {
        ++c.checked;
        if (G.idempotent[f] && !G.regular[f]) {
          fail(c, "idempotent " + describe(M, f) + " is not regular");
        }
        auto& dr = d_regular[G.D[f]];
        if (dr && *dr != G.regular[f]) {
          fail(c, "D-class of " + describe(M, f) + " mixes regular and non-regular");
        }
        dr = G.regular[f];
        for (std::size_t h = 0; h < n; ++h) {
          bool h_same  = G.H[f] == G.H[h];
          bool lr_same = G.L[f] == G.L[h] && G.R[f] == G.R[h];
          if (h_same != lr_same) {
            fail(c, "H differs from L meet R at " + describe_pair(M, f, h));
          }
          if (G.D[f] == G.D[h] && G.J[f] != G.J[h]) {
            fail(c, "D-related but not J-related: " + describe_pair(M, f, h));
          }
        }
      }
    }

    auto pairwise = [&](std::string name, auto premise, auto conclusion, std::string what) {
      auto& c = add(std::move(name));
      for (std::size_t f = 0; f < n; ++f) {
        for (std::size_t h = 0; h < n; ++h) {
          ++c.checked;
          if (premise(f, h) && !conclusion(f, h)) {
            fail(c, describe_pair(M, f, h) + " " + what);
          }
        }
      }
    };
    auto both_regular = [&](std::size_t f, std::size_t h) {
      return G.regular[f] && G.regular[h];
    };

    pairwise(
        "L-related maps have equal vertex images",
        [&](std::size_t f, std::size_t h) { return G.L[f] == G.L[h]; },
        [&](std::size_t f, std::size_t h) { return image[f] == image[h]; },
        "are L-related with different images");
    pairwise(
        "R-related maps have equal kernels",
        [&](std::size_t f, std::size_t h) { return G.R[f] == G.R[h]; },
        [&](std::size_t f, std::size_t h) { return kernel[f] == kernel[h]; },
        "are R-related with different kernels");
    pairwise(
        "D-related maps have isomorphic induced images",
        [&](std::size_t f, std::size_t h) { return G.D[f] == G.D[h]; },
        [&](std::size_t f, std::size_t h) { return iso[f] == iso[h]; },
        "are D-related with non-isomorphic induced images");

    {
      auto& c = add("a regular map's relation image equals its induced image");
      for (std::size_t f = 0; f < n; ++f) {
        ++c.checked;
        if (!G.regular[f]) {
          continue;
        }
        for (std::size_t r = 0; r < rels.size(); ++r) {
          if (!(rel_image[f][r] == restricted(rels[r], image[f]))) {
            fail(c, "regular " + describe(M, f) + " has a smaller relation image");
          }
        }
      }
    }

    pairwise(
        "regular maps with equal images are L-related",
        [&](std::size_t f, std::size_t h) { return both_regular(f, h) && image[f] == image[h]; },
        [&](std::size_t f, std::size_t h) { return G.L[f] == G.L[h]; },
        "are regular with equal images but not L-related");
    pairwise(
        "regular maps with equal kernels are R-related",
        [&](std::size_t f, std::size_t h) {
          return both_regular(f, h) && kernel[f] == kernel[h];
        },
        [&](std::size_t f, std::size_t h) { return G.R[f] == G.R[h]; },
        "are regular with equal kernels but not R-related");
    pairwise(
        "regular maps with isomorphic images are D-related",
        [&](std::size_t f, std::size_t h) { return both_regular(f, h) && iso[f] == iso[h]; },
        [&](std::size_t f, std::size_t h) { return G.D[f] == G.D[h]; },
        "are regular with isomorphic images but not D-related");

    // one Schützenberger group per H-class
    std::vector<std::size_t> reps;
    for (std::size_t f = 0; f < n; ++f) {
      if (G.H[f] == reps.size()) {
        reps.push_back(f);
      }
    }
    std::vector<SchutzGroup> schutz;
    for (auto f : reps) {
      schutz.push_back(schutzenberger(M, G, f));
    }

    {
      auto& c = add("members of T_H restrict to automorphisms of the induced and "
                    "relation images");
      for (std::size_t k = 0; k < reps.size(); ++k) {
        auto f = reps[k];
        for (auto t : schutz[k].stabiliser) {
          ++c.checked;
          auto const& tt = M.element(t);
          bool        ok = permutes(tt, image[f]);
          for (std::size_t r = 0; ok && r < rels.size(); ++r) {
            ok = preserves(restricted(rels[r], image[f]), image[f], tt)
                 && preserves(rel_image[f][r], image[f], tt);
          }
          if (!ok) {
            fail(c, describe(M, t) + " in T_H of " + describe(M, f)
                        + " is not an automorphism of the image");
          }
        }
      }
    }

    {
      auto& c = add("gamma_s = gamma_t exactly when s and t agree on the image, and "
                    "the gamma_t form a group");
      for (std::size_t k = 0; k < reps.size(); ++k) {
        auto        f = reps[k];
        auto const& S = schutz[k];
        if (!S.is_group()) {
          fail(c, "the gamma_t for the H-class of " + describe(M, f) + " are not a group");
        }
        for (std::size_t a = 0; a < S.stabiliser.size(); ++a) {
          for (std::size_t b = 0; b < S.stabiliser.size(); ++b) {
            ++c.checked;
            auto const& s     = M.element(S.stabiliser[a]);
            auto const& t     = M.element(S.stabiliser[b]);
            bool        agree = std::all_of(image[f].begin(), image[f].end(),
                                            [&](std::uint32_t x) { return s[x] == t[x]; });
            if (agree != (S.gamma_of[a] == S.gamma_of[b])) {
              fail(c, describe_pair(M, S.stabiliser[a], S.stabiliser[b]) + " in T_H of "
                          + describe(M, f) + " break the correspondence");
            }
          }
        }
      }
    }

    {
      auto& c = add("the H-class of an idempotent is isomorphic to the automorphism "
                    "group of its image");
      for (auto e : idempotents(M)) {
        ++c.checked;
        auto group = maximal_subgroup(M, e);
        auto auts  = set_automorphisms(rels, image[e], v);
        std::vector<Transformation> restrictions;
        bool                        ok = group.order() == auts.size();
        for (auto h : group.elements) {
          auto const& hh = M.element(h);
          ok             = ok && permutes(hh, image[e]);
          for (auto const& r : rels) {
            ok = ok && preserves(r, image[e], hh);
          }
          Transformation res;
          for (auto x : image[e]) {
            res.push_back(hh[x]);
          }
          restrictions.push_back(std::move(res));
        }
        std::sort(restrictions.begin(), restrictions.end());
        ok = ok
             && std::adjacent_find(restrictions.begin(), restrictions.end())
                    == restrictions.end();
        if (!ok) {
          fail(c, "idempotent " + describe(M, e) + ": |H_e| = " + std::to_string(group.order())
                      + ", |Aut| = " + std::to_string(auts.size()));
        }
      }
    }

    {
      auto& c = add("an injective endomorphism followed by an automorphism of its image "
                    "stays in its L-class");
      for (std::size_t f = 0; f < n; ++f) {
        if (image[f].size() != v) {
          continue;
        }
        for (auto const& a : set_automorphisms(rel_image[f], image[f], v)) {
          ++c.checked;
          Transformation fa(v);
          for (std::size_t i = 0; i < v; ++i) {
            fa[i] = a[M.element(f)[i]];
          }
          auto idx = M.find(fa);
          if (!idx || G.L[*idx] != G.L[f]) {
            fail(c, describe(M, f) + " followed by an automorphism of its image leaves "
                        "its L-class");
          }
        }
      }
    }

    {
      auto& c = add("Schützenberger groups agree in order across a D-class and match "
                    "|H| for group H-classes");
      std::vector<std::optional<std::size_t>> order(G.D_count);
      for (std::size_t k = 0; k < reps.size(); ++k) {
        ++c.checked;
        auto  f = reps[k];
        auto& o = order[G.D[f]];
        if (o && *o != schutz[k].order()) {
          fail(c, "H-classes in the D-class of " + describe(M, f)
                      + " have Schützenberger groups of different orders");
        }
        o = schutz[k].order();
        bool has_idem = std::any_of(schutz[k].h_class.begin(), schutz[k].h_class.end(),
                                    [&](std::size_t h) { return G.idempotent[h]; });
        if (has_idem && schutz[k].order() != schutz[k].h_class.size()) {
          fail(c, "group H-class of " + describe(M, f) + " has |S_H| != |H|");
        }
      }
    }
    return report;
  }

}  // namespace forge
