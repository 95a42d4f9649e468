#include "forge/structure.hpp"

#include <algorithm>  // for sort, unique, find
#include <numeric>    // for iota
#include <set>        // for set

#include "forge/config.hpp"  // for cap_from_env, kAutomorphismCap
#include "forge/errors.hpp"  // for PreconditionError, CapExceeded

namespace forge {

  std::string to_string(Kind k) {
    switch (k) {
      case Kind::graph:
        return "graph";
      case Kind::digraph:
        return "digraph";
      case Kind::bipartite:
        return "bipartite";
    }
    return {};
  }

  Kind kind_from_string(std::string const& s) {
    if (s == "graph") {
      return Kind::graph;
    } else if (s == "digraph") {
      return Kind::digraph;
    } else if (s == "bipartite") {
      return Kind::bipartite;
    }
    throw PreconditionError("unknown structure kind \"" + s
                            + "\" (expected graph, digraph or bipartite)");
  }

  ////////////////////////////////////////////////////////////////////////
  // Structure
  ////////////////////////////////////////////////////////////////////////

  Structure::Structure(Kind kind, std::vector<VertexName> vertices)
      : _kind(kind), _vertices(std::move(vertices)) {
    if (_vertices.empty()) {
      throw PreconditionError("structures must have at least one vertex");
    }
    std::sort(_vertices.begin(), _vertices.end());
    for (std::size_t i = 0; i + 1 < _vertices.size(); ++i) {
      if (_vertices[i] == _vertices[i + 1]) {
        throw PreconditionError("duplicate vertex " + _vertices[i].to_string());
      }
    }
    _index.reserve(_vertices.size());
    for (std::size_t i = 0; i < _vertices.size(); ++i) {
      _index.emplace(_vertices[i], i);
    }
    _adj = BitMatrix(_vertices.size());
  }

  void Structure::add_pair(NamePair const& e, bool symmetric) {
    auto u = find(e.first);
    auto v = find(e.second);
    if (!u || !v) {
      throw PreconditionError("edge (" + e.first.to_string() + ", "
                              + e.second.to_string()
                              + ") has an endpoint outside the vertex list");
    }
    if (*u == *v) {
      throw PreconditionError("loop at " + e.first.to_string()
                              + " violates irreflexivity");
    }
    if (_kind == Kind::bipartite && _parts[*u] == _parts[*v]) {
      throw PreconditionError("edge (" + e.first.to_string() + ", "
                              + e.second.to_string()
                              + ") joins two vertices of the same part");
    }
    _adj.set(*u, *v);
    if (symmetric) {
      _adj.set(*v, *u);
    }
  }

  Structure Structure::graph(std::vector<VertexName>      vertices,
                             std::vector<NamePair> const& edges) {
    Structure s(Kind::graph, std::move(vertices));
    for (auto const& e : edges) {
      s.add_pair(e, true);
    }
    return s;
  }

  Structure Structure::digraph(std::vector<VertexName>      vertices,
                               std::vector<NamePair> const& arcs) {
    Structure s(Kind::digraph, std::move(vertices));
    for (auto const& e : arcs) {
      s.add_pair(e, false);
    }
    return s;
  }

  Structure Structure::bipartite(std::vector<VertexName>          vertices,
                                 std::map<VertexName, int> const& parts,
                                 std::vector<NamePair> const&     edges) {
    Structure s(Kind::bipartite, std::move(vertices));
    s._parts.assign(s.size(), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto it = parts.find(s._vertices[i]);
      if (it == parts.end()) {
        throw PreconditionError("vertex " + s._vertices[i].to_string()
                                + " has no part");
      }
      if (it->second != 0 && it->second != 1) {
        throw PreconditionError("part of " + s._vertices[i].to_string()
                                + " must be 0 or 1");
      }
      s._parts[i] = static_cast<std::uint8_t>(it->second);
    }
    for (auto const& [v, p] : parts) {
      if (!s.contains(v)) {
        throw PreconditionError("part given for unknown vertex " + v.to_string());
      }
    }
    for (auto const& e : edges) {
      s.add_pair(e, true);
    }
    return s;
  }

  std::optional<std::size_t> Structure::find(VertexName const& v) const {
    auto it = _index.find(v);
    if (it == _index.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::size_t Structure::index_of(VertexName const& v) const {
    auto i = find(v);
    if (!i) {
      throw PreconditionError("unknown vertex " + v.to_string());
    }
    return *i;
  }

  bool Structure::adjacent(VertexName const& u, VertexName const& v) const {
    return _adj.get(index_of(u), index_of(v));
  }

  std::vector<std::size_t> Structure::out_neighbours(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j) {
      if (_adj.get(i, j)) {
        out.push_back(j);
      }
    }
    return out;
  }

  std::vector<std::size_t> Structure::in_neighbours(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j) {
      if (_adj.get(j, i)) {
        out.push_back(j);
      }
    }
    return out;
  }

  std::size_t Structure::degree(std::size_t i) const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < size(); ++j) {
      d += _adj.get(i, j);
      if (_kind == Kind::digraph) {
        d += _adj.get(j, i);
      }
    }
    return d;
  }

  std::vector<NamePair> Structure::edges() const {
    std::vector<NamePair> out;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = (_kind == Kind::digraph ? 0 : i + 1); j < size(); ++j) {
        if (_adj.get(i, j)) {
          out.emplace_back(_vertices[i], _vertices[j]);
        }
      }
    }
    return out;
  }

  std::size_t Structure::edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = (_kind == Kind::digraph ? 0 : i + 1); j < size(); ++j) {
        count += _adj.get(i, j);
      }
    }
    return count;
  }

  bool Structure::operator==(Structure const& other) const {
    return _kind == other._kind && _vertices == other._vertices
           && _parts == other._parts && _adj == other._adj;
  }

  ////////////////////////////////////////////////////////////////////////
  // VertexMap
  ////////////////////////////////////////////////////////////////////////

  VertexName const& VertexMap::operator()(VertexName const& from) const {
    auto it = _assignment.find(from);
    if (it == _assignment.end()) {
      throw PreconditionError("map is undefined at " + from.to_string());
    }
    return it->second;
  }

  VertexMap identity_map(Structure const& s) {
    VertexMap m;
    for (auto const& v : s.vertices()) {
      m.set(v, v);
    }
    return m;
  }

  VertexMap then(VertexMap const& first, VertexMap const& second) {
    VertexMap out;
    for (auto const& [from, mid] : first.assignment()) {
      out.set(from, second(mid));
    }
    return out;
  }

  bool is_injective(VertexMap const& m) {
    std::set<VertexName> seen;
    for (auto const& [from, to] : m.assignment()) {
      if (!seen.insert(to).second) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Elementary operations
  ////////////////////////////////////////////////////////////////////////

  namespace {
    std::map<VertexName, int> part_map(Structure const& b) {
      std::map<VertexName, int> parts;
      for (std::size_t i = 0; i < b.size(); ++i) {
        parts[b.vertex(i)] = b.part(i);
      }
      return parts;
    }

    Structure rebuild(Structure const&               like,
                      std::vector<VertexName>        vertices,
                      std::vector<NamePair> const&   edges,
                      std::map<VertexName, int> const& parts) {
      switch (like.kind()) {
        case Kind::graph:
          return Structure::graph(std::move(vertices), edges);
        case Kind::digraph:
          return Structure::digraph(std::move(vertices), edges);
        case Kind::bipartite:
          return Structure::bipartite(std::move(vertices), parts, edges);
      }
      return {};
    }

    // Positions of m's images in cod; validates totality and kinds.
    std::vector<std::size_t> positions(Structure const& dom,
                                       Structure const& cod,
                                       VertexMap const& m) {
      if (dom.kind() != cod.kind()) {
        throw PreconditionError("map between structures of different kinds ("
                                + to_string(dom.kind()) + " and "
                                + to_string(cod.kind()) + ")");
      }
      std::vector<std::size_t> img(dom.size());
      for (std::size_t i = 0; i < dom.size(); ++i) {
        VertexName const& target = m(dom.vertex(i));
        auto              j      = cod.find(target);
        if (!j) {
          throw PreconditionError("image " + target.to_string() + " of "
                                  + dom.vertex(i).to_string()
                                  + " is not a codomain vertex");
        }
        img[i] = *j;
      }
      return img;
    }
  }  // namespace

  Structure complement(Structure const& g) {
    if (g.kind() == Kind::bipartite) {
      throw PreconditionError(
          "complement expects a graph or digraph; use bipartite_complement");
    }
    std::vector<NamePair> pairs;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = (g.kind() == Kind::digraph ? 0 : i + 1); j < g.size();
           ++j) {
        if (i != j && !g.adjacent(i, j)) {
          pairs.emplace_back(g.vertex(i), g.vertex(j));
        }
      }
    }
    return rebuild(g, g.vertices(), pairs, {});
  }

  Structure bipartite_complement(Structure const& b) {
    if (b.kind() != Kind::bipartite) {
      throw PreconditionError("bipartite_complement expects a bipartite graph");
    }
    std::vector<NamePair> pairs;
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        if (b.part(i) != b.part(j) && !b.adjacent(i, j)) {
          pairs.emplace_back(b.vertex(i), b.vertex(j));
        }
      }
    }
    return Structure::bipartite(b.vertices(), part_map(b), pairs);
  }

  Structure disjoint_union(Structure const& g,
                           Structure const& h,
                           PartPairing      pairing) {
    if (g.kind() != h.kind()) {
      throw PreconditionError("disjoint_union needs structures of one kind");
    }
    std::vector<VertexName> vertices = g.vertices();
    for (auto const& v : h.vertices()) {
      if (g.contains(v)) {
        throw PreconditionError("disjoint_union: vertex name " + v.to_string()
                                + " occurs in both structures");
      }
      vertices.push_back(v);
    }
    std::vector<NamePair> edges = g.edges();
    auto                  more  = h.edges();
    edges.insert(edges.end(), more.begin(), more.end());
    std::map<VertexName, int> parts;
    if (g.kind() == Kind::bipartite) {
      parts = part_map(g);
      for (std::size_t i = 0; i < h.size(); ++i) {
        int p = h.part(i);
        parts[h.vertex(i)] = pairing == PartPairing::same ? p : 1 - p;
      }
    }
    return rebuild(g, std::move(vertices), edges, parts);
  }

  Structure induced(Structure const& g, std::vector<VertexName> const& subset) {
    if (subset.empty()) {
      throw PreconditionError("induced substructure needs a non-empty vertex set");
    }
    std::vector<VertexName> vertices = subset;
    normalise(vertices);
    std::vector<std::size_t> idx;
    for (auto const& v : vertices) {
      idx.push_back(g.index_of(v));
    }
    std::vector<NamePair> pairs;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        if (a != b && g.adjacent(idx[a], idx[b])
            && (g.kind() == Kind::digraph || a < b)) {
          pairs.emplace_back(vertices[a], vertices[b]);
        }
      }
    }
    std::map<VertexName, int> parts;
    if (g.kind() == Kind::bipartite) {
      for (std::size_t a = 0; a < idx.size(); ++a) {
        parts[vertices[a]] = g.part(idx[a]);
      }
    }
    return rebuild(g, vertices, pairs, parts);
  }

  ////////////////////////////////////////////////////////////////////////
  // Homomorphisms
  ////////////////////////////////////////////////////////////////////////

  bool is_homomorphism(Structure const& dom,
                       Structure const& cod,
                       VertexMap const& m) {
    auto img = positions(dom, cod, m);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      for (std::size_t j = 0; j < dom.size(); ++j) {
        if (dom.adjacent(i, j) && !cod.adjacent(img[i], img[j])) {
          return false;
        }
        // P is a relation too: same part must go to same part
        if (dom.kind() == Kind::bipartite && dom.same_part(i, j)
            && !cod.same_part(img[i], img[j])) {
          return false;
        }
      }
    }
    return true;
  }

  bool is_embedding(Structure const& dom, Structure const& cod, VertexMap const& m) {
    auto img = positions(dom, cod, m);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      for (std::size_t j = 0; j < dom.size(); ++j) {
        if (i != j && img[i] == img[j]) {
          return false;
        }
        if (dom.adjacent(i, j) != cod.adjacent(img[i], img[j])) {
          return false;
        }
        if (dom.kind() == Kind::bipartite
            && dom.same_part(i, j) != cod.same_part(img[i], img[j])) {
          return false;
        }
      }
    }
    return true;
  }

  Partition kernel(Structure const& dom, VertexMap const& m) {
    std::map<VertexName, std::vector<VertexName>> classes;
    for (auto const& v : dom.vertices()) {
      classes[m(v)].push_back(v);
    }
    Partition out;
    for (auto& [img, members] : classes) {
      out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  ImageReport image_subgraph(Structure const& dom,
                             Structure const& cod,
                             VertexMap const& m) {
    auto        img = positions(dom, cod, m);
    ImageReport report;
    std::set<std::size_t> vf(img.begin(), img.end());
    for (auto i : vf) {
      report.vertices.push_back(cod.vertex(i));
    }
    std::set<std::pair<std::size_t, std::size_t>> ef, pf;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      for (std::size_t j = 0; j < dom.size(); ++j) {
        if (dom.adjacent(i, j)) {
          auto a = img[i], b = img[j];
          if (cod.kind() != Kind::digraph && a > b) {
            std::swap(a, b);
          }
          ef.emplace(a, b);
        }
        if (dom.kind() == Kind::bipartite && dom.same_part(i, j)) {
          pf.emplace(img[i], img[j]);
        }
      }
    }
    for (auto [a, b] : ef) {
      report.relation_image.emplace_back(cod.vertex(a), cod.vertex(b));
    }
    report.induced = induced(cod, report.vertices);
    report.equal   = report.relation_image == report.induced.edges();
    if (report.equal && dom.kind() == Kind::bipartite) {
      // the partition relation must be hit completely as well
      for (auto a : vf) {
        for (auto b : vf) {
          if (cod.same_part(a, b) && pf.count({a, b}) == 0) {
            report.equal = false;
          }
        }
      }
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Isomorphism search
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Joint colour refinement of g and h, so colours are comparable across
    // the two structures.  Returns false if the colour histograms differ.
    bool refine(Structure const&          g,
                Structure const&          h,
                std::vector<std::size_t>& cg,
                std::vector<std::size_t>& ch) {
      std::size_t const n       = g.size();
      bool const        bip     = g.kind() == Kind::bipartite;
      auto              initial = [&](Structure const& s, std::size_t i) {
        std::vector<std::size_t> sig = {s.out_neighbours(i).size(),
                                        s.in_neighbours(i).size()};
        if (bip) {
          std::size_t same = 0;
          for (std::size_t j = 0; j < s.size(); ++j) {
            same += s.same_part(i, j);
          }
          sig.push_back(same);
        }
        return sig;
      };
      using Sig = std::vector<std::size_t>;
      std::vector<Sig> sg(n), sh(n);
      for (std::size_t i = 0; i < n; ++i) {
        sg[i] = initial(g, i);
        sh[i] = initial(h, i);
      }
      std::size_t classes = 0;
      while (true) {
        std::map<Sig, std::size_t> ids;
        for (auto const& s : sg) {
          ids.emplace(s, 0);
        }
        for (auto const& s : sh) {
          ids.emplace(s, 0);
        }
        std::size_t next = 0;
        for (auto& [s, id] : ids) {
          id = next++;
        }
        cg.assign(n, 0);
        ch.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          cg[i] = ids[sg[i]];
          ch[i] = ids[sh[i]];
        }
        std::vector<std::size_t> histg(ids.size(), 0), histh(ids.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
          ++histg[cg[i]];
          ++histh[ch[i]];
        }
        if (histg != histh) {
          return false;
        }
        if (ids.size() == classes) {
          return true;
        }
        classes = ids.size();
        auto signature = [&](Structure const& s,
                             std::vector<std::size_t> const& c,
                             std::size_t i) {
          Sig sig = {c[i]};
          std::vector<std::size_t> out, in, same;
          for (std::size_t j = 0; j < n; ++j) {
            if (s.adjacent(i, j)) {
              out.push_back(c[j]);
            }
            if (s.adjacent(j, i)) {
              in.push_back(c[j]);
            }
            if (bip && j != i && s.same_part(i, j)) {
              same.push_back(c[j]);
            }
          }
          for (auto* part : {&out, &in, &same}) {
            std::sort(part->begin(), part->end());
            sig.push_back(n + 1);  // separator
            sig.insert(sig.end(), part->begin(), part->end());
          }
          return sig;
        };
        for (std::size_t i = 0; i < n; ++i) {
          sg[i] = signature(g, cg, i);
          sh[i] = signature(h, ch, i);
        }
      }
    }

    // Calls visit(image) for each isomorphism g -> h; stops when visit
    // returns false.
    template <typename Visit>
    void search(Structure const& g, Structure const& h, Visit&& visit) {
      std::size_t const n = g.size();
      if (g.kind() != h.kind() || n != h.size()
          || g.edge_count() != h.edge_count()) {
        return;
      }
      std::vector<std::size_t> cg, ch;
      if (!refine(g, h, cg, ch)) {
        return;
      }
      bool const               bip = g.kind() == Kind::bipartite;
      std::vector<std::size_t> img(n, n), order;
      std::vector<bool>        used(n, false);
      bool                     stop = false;

      auto consistent = [&](std::size_t v, std::size_t w) {
        if (cg[v] != ch[w] || used[w]) {
          return false;
        }
        for (auto u : order) {
          std::size_t x = img[u];
          if (g.adjacent(v, u) != h.adjacent(w, x)
              || g.adjacent(u, v) != h.adjacent(x, w)) {
            return false;
          }
          if (bip && g.same_part(v, u) != h.same_part(w, x)) {
            return false;
          }
        }
        return true;
      };

      auto recurse = [&](auto&& self) -> void {
        if (stop) {
          return;
        }
        if (order.size() == n) {
          stop = !visit(img);
          return;
        }
        // most constrained unassigned vertex first
        std::size_t              best = n;
        std::vector<std::size_t> best_candidates;
        for (std::size_t v = 0; v < n; ++v) {
          if (img[v] != n) {
            continue;
          }
          std::vector<std::size_t> candidates;
          for (std::size_t w = 0; w < n; ++w) {
            if (consistent(v, w)) {
              candidates.push_back(w);
            }
          }
          if (best == n || candidates.size() < best_candidates.size()) {
            best            = v;
            best_candidates = std::move(candidates);
            if (best_candidates.empty()) {
              return;
            }
          }
        }
        for (auto w : best_candidates) {
          img[best] = w;
          used[w]   = true;
          order.push_back(best);
          self(self);
          order.pop_back();
          used[w]   = false;
          img[best] = n;
          if (stop) {
            return;
          }
        }
      };
      recurse(recurse);
    }

    void check_cap(Structure const& g, std::optional<std::size_t> cap) {
      std::size_t limit = cap.value_or(cap_from_env(kAutomorphismCap));
      if (g.size() > limit) {
        throw CapExceeded("isomorphism search is capped at "
                          + std::to_string(limit) + " vertices, structure has "
                          + std::to_string(g.size()));
      }
    }

    VertexMap to_map(Structure const&                g,
                     Structure const&                h,
                     std::vector<std::size_t> const& img) {
      VertexMap m;
      for (std::size_t i = 0; i < img.size(); ++i) {
        m.set(g.vertex(i), h.vertex(img[i]));
      }
      return m;
    }
  }  // namespace

  std::vector<VertexMap> automorphisms(Structure const& g,
                                       std::optional<std::size_t> cap) {
    check_cap(g, cap);
    std::vector<std::vector<std::size_t>> found;
    search(g, g, [&](std::vector<std::size_t> const& img) {
      found.push_back(img);
      return true;
    });
    std::sort(found.begin(), found.end());
    std::vector<VertexMap> out;
    for (auto const& img : found) {
      out.push_back(to_map(g, g, img));
    }
    return out;
  }

  std::size_t count_automorphisms(Structure const& g,
                                  std::optional<std::size_t> cap) {
    check_cap(g, cap);
    std::size_t count = 0;
    search(g, g, [&](std::vector<std::size_t> const&) {
      ++count;
      return true;
    });
    return count;
  }

  std::optional<VertexMap> isomorphism(Structure const& g,
                                       Structure const& h,
                                       std::optional<std::size_t> cap) {
    check_cap(g, cap);
    check_cap(h, cap);
    std::optional<VertexMap> out;
    search(g, h, [&](std::vector<std::size_t> const& img) {
      out = to_map(g, h, img);
      return false;
    });
    return out;
  }

  bool isomorphic(Structure const& g,
                  Structure const& h,
                  std::optional<std::size_t> cap) {
    return isomorphism(g, h, cap).has_value();
  }

  ////////////////////////////////////////////////////////////////////////
  // ac_check and components
  ////////////////////////////////////////////////////////////////////////

  AcReport ac_check(Structure const& g, AcOptions const& options) {
    auto pool_of = [&g](std::optional<std::vector<VertexName>> const& names) {
      std::vector<std::size_t> out;
      if (!names) {
        out.resize(g.size());
        std::iota(out.begin(), out.end(), 0);
      } else {
        for (auto const& v : *names) {
          out.push_back(g.index_of(v));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
      }
      return out;
    };
    auto const subsets   = pool_of(options.subset_pool);
    auto const witnesses = pool_of(options.witness_pool);
    std::size_t const k  = std::min(options.subset_cap.value_or(subsets.size()),
                                   subsets.size());

    AcReport report;
    auto     count_witnesses = [&](std::vector<std::size_t> const& a) {
      std::size_t count = 0;
      for (auto w : witnesses) {
        bool ok = true;
        for (auto x : a) {
          if (!g.adjacent(w, x) || !g.adjacent(x, w)) {
            ok = false;
            break;
          }
        }
        count += ok;
      }
      return count;
    };

    for (std::size_t size = 0; size <= k; ++size) {
      std::vector<std::size_t> pick(size);
      std::iota(pick.begin(), pick.end(), 0);
      while (true) {
        std::vector<std::size_t> a;
        for (auto p : pick) {
          a.push_back(subsets[p]);
        }
        bool one_part = true;
        for (auto x : a) {
          one_part = one_part && g.same_part(x, a.front());
        }
        if (one_part) {
          ++report.subsets_checked;
          std::size_t count = count_witnesses(a);
          if (count < options.min_witnesses) {
            report.ok        = false;
            report.witnesses = count;
            for (auto x : a) {
              report.failing_subset.push_back(g.vertex(x));
            }
            return report;
          }
        }
        // next combination in lexicographic order
        std::size_t i = size;
        while (i > 0 && pick[i - 1] == subsets.size() - size + i - 1) {
          --i;
        }
        if (i == 0) {
          break;
        }
        ++pick[i - 1];
        for (std::size_t j = i; j < size; ++j) {
          pick[j] = pick[j - 1] + 1;
        }
      }
    }
    return report;
  }

  Partition components(Structure const& g) {
    std::vector<std::size_t> parent(g.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&parent](std::size_t x) {
      while (parent[x] != x) {
        x = parent[x] = parent[parent[x]];
      }
      return x;
    };
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (g.adjacent(i, j)) {
          parent[root(i)] = root(j);
        }
      }
    }
    std::map<std::size_t, std::vector<VertexName>> groups;
    for (std::size_t i = 0; i < g.size(); ++i) {
      groups[root(i)].push_back(g.vertex(i));
    }
    Partition out;
    for (auto& [r, members] : groups) {
      out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

}  // namespace forge
