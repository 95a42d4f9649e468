#include "forge/constructions.hpp"

#include <algorithm>  // for includes, max
#include <charconv>   // for from_chars
#include <iostream>   // for cerr
#include <map>        // for map
#include <mutex>      // for mutex, lock_guard
#include <numeric>    // for iota

#include "forge/errors.hpp"  // for PreconditionError, ParseError, CapExceeded

namespace forge {

  ////////////////////////////////////////////////////////////////////////
  // IndexSet
  ////////////////////////////////////////////////////////////////////////

  namespace {
    void check_members(std::set<std::uint64_t> const& values) {
      for (auto n : values) {
        if (n < 2) {
          throw PreconditionError("index sets only contain naturals >= 2, got "
                                  + std::to_string(n));
        }
      }
    }
  }  // namespace

  IndexSet::IndexSet(std::initializer_list<std::uint64_t> values)
      : _values(values) {
    check_members(_values);
  }

  IndexSet::IndexSet(std::set<std::uint64_t> values) : _values(std::move(values)) {
    check_members(_values);
  }

  IndexSet IndexSet::parse(std::string_view text) {
    std::set<std::uint64_t> values;
    std::size_t             start = 0;
    if (text.find_first_not_of(' ') == std::string_view::npos) {
      return IndexSet();
    }
    while (start <= text.size()) {
      std::size_t      end  = std::min(text.find(',', start), text.size());
      std::string_view item = text.substr(start, end - start);
      while (!item.empty() && item.front() == ' ') {
        item.remove_prefix(1);
      }
      while (!item.empty() && item.back() == ' ') {
        item.remove_suffix(1);
      }
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        throw ParseError("bad index list \"" + std::string(text) + "\"");
      }
      values.insert(value);
      start = end + 1;
    }
    return IndexSet(std::move(values));
  }

  IndexSet IndexSet::shifted(std::uint64_t k) const {
    std::set<std::uint64_t> out;
    for (auto n : _values) {
      out.insert(n + k);
    }
    return IndexSet(std::move(out));
  }

  bool IndexSet::subset_of(IndexSet const& other) const {
    return std::includes(other._values.begin(),
                         other._values.end(),
                         _values.begin(),
                         _values.end());
  }

  std::string IndexSet::to_string() const {
    std::string out = "{";
    for (auto it = _values.begin(); it != _values.end(); ++it) {
      if (it != _values.begin()) {
        out += ",";
      }
      out += std::to_string(*it);
    }
    return out + "}";
  }

  ////////////////////////////////////////////////////////////////////////
  // Warnings
  ////////////////////////////////////////////////////////////////////////

  namespace {
    std::mutex                               warning_mutex;
    std::function<void(std::string const&)> warning_handler;
  }  // namespace

  void set_warning_handler(std::function<void(std::string const&)> handler) {
    std::lock_guard<std::mutex> lock(warning_mutex);
    warning_handler = std::move(handler);
  }

  void warn(std::string const& message) {
    std::lock_guard<std::mutex> lock(warning_mutex);
    if (warning_handler) {
      warning_handler(message);
    } else {
      std::cerr << "warning: " << message << '\n';
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Names
  ////////////////////////////////////////////////////////////////////////

  VertexName path_vertex(std::uint64_t n) {
    return VertexName::gadget("l", n);
  }

  VertexName pendant_vertex(std::uint64_t n) {
    return VertexName::gadget("v", n);
  }

  VertexName apex_vertex(std::uint64_t i) {
    return VertexName::gadget("x", i);
  }

  VertexName co_apex_vertex(std::uint64_t i) {
    return VertexName::gadget("y", i);
  }

  VertexName blowup_vertex(VertexName const& base, std::uint64_t r) {
    return VertexName::gadget("b", r, {base});
  }

  VertexName midpoint_vertex(VertexName const& u, VertexName const& v) {
    return u < v ? VertexName::gadget("m", 0, {u, v})
                 : VertexName::gadget("m", 0, {v, u});
  }

  Structure tagged(Structure const& g, std::string const& label, std::uint64_t index) {
    return relabel(g, [&](VertexName const& v) {
      return VertexName::gadget(label, index, {v});
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // L_S and relatives
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Members of S that fit below N, warning about the rest.
    std::vector<std::uint64_t> effective(IndexSet const& S, std::uint64_t N) {
      std::vector<std::uint64_t> out;
      std::vector<std::uint64_t> dropped;
      for (auto n : S.values()) {
        (n <= N ? out : dropped).push_back(n);
      }
      if (!dropped.empty()) {
        std::string list;
        for (auto n : dropped) {
          list += (list.empty() ? "" : ",") + std::to_string(n);
        }
        warn("members " + list + " of S exceed N = " + std::to_string(N)
             + " and are ignored");
      }
      return out;
    }

    void L_parts(IndexSet const&          S,
                 std::uint64_t            N,
                 std::vector<VertexName>& vertices,
                 std::vector<NamePair>&   edges) {
      for (std::uint64_t n = 0; n <= N; ++n) {
        vertices.push_back(path_vertex(n));
        if (n > 0) {
          edges.emplace_back(path_vertex(n - 1), path_vertex(n));
        }
      }
      for (auto n : effective(S, N)) {
        vertices.push_back(pendant_vertex(n));
        edges.emplace_back(path_vertex(n), pendant_vertex(n));
      }
    }

    std::map<VertexName, int> lambda_parts(std::vector<VertexName> const& vertices) {
      std::map<VertexName, int> parts;
      for (auto const& v : vertices) {
        // l_n has parity n, v_n the opposite parity
        int p    = static_cast<int>(v.index() % 2);
        parts[v] = v.label() == "l" ? p : 1 - p;
      }
      return parts;
    }
  }  // namespace

  Structure build_L(IndexSet const& S, std::uint64_t N) {
    std::vector<VertexName> vertices;
    std::vector<NamePair>   edges;
    L_parts(S, N, vertices, edges);
    return Structure::graph(std::move(vertices), edges);
  }

  Structure build_L_directed(IndexSet const& S, std::uint64_t N) {
    std::vector<VertexName> vertices;
    std::vector<NamePair>   edges;
    L_parts(S, N, vertices, edges);
    std::vector<NamePair> arcs;
    for (auto const& [u, v] : edges) {
      arcs.emplace_back(u, v);
      arcs.emplace_back(v, u);
    }
    return Structure::digraph(std::move(vertices), arcs);
  }

  Structure build_Lambda(IndexSet const& S, std::uint64_t N) {
    std::vector<VertexName> vertices;
    std::vector<NamePair>   edges;
    L_parts(S, N, vertices, edges);
    auto parts = lambda_parts(vertices);
    return Structure::bipartite(std::move(vertices), parts, edges);
  }

  Structure build_M(IndexSet const& S, std::uint64_t N, std::uint64_t K) {
    if (K == 0) {
      throw PreconditionError("build_M needs K >= 1 apex vertices");
    }
    std::vector<VertexName> vertices;
    std::vector<NamePair>   edges;
    L_parts(S, N, vertices, edges);
    std::vector<VertexName> core = vertices;
    for (std::uint64_t i = 0; i < K; ++i) {
      for (auto const& v : core) {
        edges.emplace_back(apex_vertex(i), v);
      }
      for (std::uint64_t j = 0; j < i; ++j) {
        edges.emplace_back(apex_vertex(j), apex_vertex(i));
      }
      vertices.push_back(apex_vertex(i));
    }
    return Structure::graph(std::move(vertices), edges);
  }

  Structure build_N(IndexSet const& S, std::uint64_t N, std::uint64_t K) {
    if (K == 0) {
      throw PreconditionError("build_N needs K >= 1 vertices per part");
    }
    std::vector<VertexName> vertices;
    std::vector<NamePair>   edges;
    L_parts(S, N, vertices, edges);
    auto parts = lambda_parts(vertices);
    for (std::uint64_t i = 0; i < K; ++i) {
      parts[apex_vertex(i)]    = 0;
      parts[co_apex_vertex(i)] = 1;
    }
    for (std::uint64_t i = 0; i < K; ++i) {
      vertices.push_back(apex_vertex(i));
      vertices.push_back(co_apex_vertex(i));
    }
    for (std::uint64_t i = 0; i < K; ++i) {
      for (auto const& v : vertices) {
        if (parts[v] == 1) {
          edges.emplace_back(apex_vertex(i), v);
        }
        if (parts[v] == 0) {
          edges.emplace_back(co_apex_vertex(i), v);
        }
      }
    }
    return Structure::bipartite(std::move(vertices), parts, edges);
  }

  Structure dashv(Structure const& d) {
    if (d.kind() != Kind::digraph) {
      throw PreconditionError("dashv expects a digraph");
    }
    std::vector<VertexName> vertices = d.vertices();
    std::vector<NamePair>   edges;
    for (auto const& [u, v] : d.edges()) {
      VertexName x = VertexName::gadget("x", 0, {u, v});
      VertexName y = VertexName::gadget("y", 0, {u, v});
      VertexName z = VertexName::gadget("z", 0, {u, v});
      vertices.insert(vertices.end(), {x, y, z});
      edges.emplace_back(u, x);
      edges.emplace_back(x, y);
      edges.emplace_back(y, z);
      edges.emplace_back(y, v);
    }
    return Structure::graph(std::move(vertices), edges);
  }

  Structure prime(Structure const& g) {
    if (g.kind() != Kind::graph) {
      throw PreconditionError("prime expects a graph");
    }
    std::vector<VertexName>   vertices = g.vertices();
    std::map<VertexName, int> parts;
    for (auto const& v : vertices) {
      parts[v] = 0;
    }
    std::vector<NamePair> edges;
    for (auto const& [u, v] : g.edges()) {
      VertexName m = midpoint_vertex(u, v);
      vertices.push_back(m);
      parts[m] = 1;
      edges.emplace_back(u, m);
      edges.emplace_back(m, v);
    }
    return Structure::bipartite(std::move(vertices), parts, edges);
  }

  Structure blowup(Structure const& g, std::uint64_t r) {
    if (r == 0) {
      throw PreconditionError("blowup needs r >= 1");
    }
    if (g.kind() == Kind::digraph) {
      throw PreconditionError("blowup expects a graph or bipartite graph");
    }
    std::vector<VertexName>   vertices;
    std::map<VertexName, int> parts;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::uint64_t a = 0; a < r; ++a) {
        VertexName v = blowup_vertex(g.vertex(i), a);
        vertices.push_back(v);
        parts[v] = g.part(i);
      }
    }
    std::vector<NamePair> edges;
    for (auto const& [u, v] : g.edges()) {
      for (std::uint64_t a = 0; a < r; ++a) {
        for (std::uint64_t b = 0; b < r; ++b) {
          edges.emplace_back(blowup_vertex(u, a), blowup_vertex(v, b));
        }
      }
    }
    if (g.kind() == Kind::bipartite) {
      return Structure::bipartite(std::move(vertices), parts, edges);
    }
    return Structure::graph(std::move(vertices), edges);
  }

  std::vector<VertexName> blowup_base(Structure const& sharp, std::uint64_t* r) {
    std::map<VertexName, std::set<std::uint64_t>> copies;
    for (auto const& v : sharp.vertices()) {
      if (!v.is_gadget() || v.label() != "b" || v.parents().size() != 1) {
        throw PreconditionError(v.to_string() + " is not a blowup vertex");
      }
      copies[v.parents()[0]].insert(v.index());
    }
    std::uint64_t width = copies.begin()->second.size();
    for (auto const& [base, indices] : copies) {
      if (indices.size() != width || *indices.rbegin() + 1 != width) {
        throw PreconditionError("vertex " + base.to_string()
                                + " does not have copies 0.." + std::to_string(width - 1));
      }
    }
    if (r != nullptr) {
      *r = width;
    }
    std::vector<VertexName> out;
    for (auto const& [base, indices] : copies) {
      out.push_back(base);
    }
    return out;
  }

  namespace {
    std::vector<VertexName> checked_base(Structure const&                   sharp,
                                         std::vector<std::uint64_t> const& b,
                                         std::uint64_t&                    r) {
      auto base = blowup_base(sharp, &r);
      if (b.size() != base.size()) {
        throw PreconditionError("selector has length " + std::to_string(b.size())
                                + " but the blowup has "
                                + std::to_string(base.size()) + " base vertices");
      }
      for (auto x : b) {
        if (x >= r) {
          throw PreconditionError("selector entry " + std::to_string(x)
                                  + " is not below r = " + std::to_string(r));
        }
      }
      return base;
    }
  }  // namespace

  VertexMap phi_b(Structure const& sharp, std::vector<std::uint64_t> const& b) {
    std::uint64_t r    = 0;
    auto          base = checked_base(sharp, b, r);
    VertexMap     m;
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::uint64_t s = 0; s < r; ++s) {
        m.set(blowup_vertex(base[i], s), blowup_vertex(base[i], b[i]));
      }
    }
    return m;
  }

  VertexMap psi_b(Structure const& sharp, std::vector<std::uint64_t> const& b) {
    std::uint64_t r    = 0;
    auto          base = checked_base(sharp, b, r);
    VertexMap     m;
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::uint64_t s = 0; s < r; ++s) {
        m.set(blowup_vertex(base[i], s), blowup_vertex(base[i], (s + b[i]) % r));
      }
    }
    return m;
  }

  std::vector<VertexName> diagonal(Structure const&                  sharp,
                                   std::vector<std::uint64_t> const& b) {
    std::uint64_t           r    = 0;
    auto                    base = checked_base(sharp, b, r);
    std::vector<VertexName> out;
    for (std::size_t i = 0; i < base.size(); ++i) {
      out.push_back(blowup_vertex(base[i], b[i]));
    }
    return out;
  }

  Structure delta_construction(Structure const& g, IndexSet const& S, std::uint64_t N) {
    if (g.kind() != Kind::graph) {
      throw PreconditionError("delta_construction expects a graph");
    }
    Structure L       = build_L(S, N);
    bool      clashes = false;
    for (auto const& v : L.vertices()) {
      clashes = clashes || g.contains(v);
    }
    if (clashes) {
      L = tagged(L, "L");
    }
    return complement(disjoint_union(g, L));
  }

  VertexMap translate_map(IndexSet const& S, std::uint64_t N, std::uint64_t k) {
    VertexMap m;
    for (std::uint64_t n = 0; n <= N; ++n) {
      m.set(path_vertex(n), path_vertex(n + k));
    }
    for (auto n : S.values()) {
      if (n <= N) {
        m.set(pendant_vertex(n), pendant_vertex(n + k));
      }
    }
    return m;
  }

  ////////////////////////////////////////////////////////////////////////
  // schutz_pair
  ////////////////////////////////////////////////////////////////////////

  SchutzPair schutz_pair(Structure const&             g,
                         std::vector<IndexSet> const& S_seq,
                         std::uint64_t                stages,
                         SchutzCaps const&            caps) {
    if (g.kind() != Kind::graph) {
      throw PreconditionError("schutz_pair expects a graph");
    }
    if (S_seq.size() < stages) {
      throw PreconditionError("schutz_pair needs one index set per stage ("
                              + std::to_string(stages) + " stages, "
                              + std::to_string(S_seq.size()) + " sets)");
    }
    for (std::size_t i = 0; i < stages; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (S_seq[i] == S_seq[j]) {
          throw PreconditionError("the index sets S_n must be distinct");
        }
      }
    }
    SchutzPair result;

    // Gamma*_0 is the complement of g
    std::vector<VertexName> current = g.vertices();
    std::vector<NamePair>   star    = complement(g).edges();
    std::vector<VertexName> all     = current;

    for (std::uint64_t n = 0; n < stages; ++n) {
      std::uint64_t N = caps.path_length.value_or(S_seq[n].max() + 2);
      Structure     L = tagged(build_L(S_seq[n], N), "L", n);
      // tagged() puts the original name in the parents; rebuild the names as
      // g:l.m(g:L.n) so that the copy index sits in the parent
      L = relabel(L, [n](VertexName const& v) {
        VertexName const& inner = v.parents()[0];
        return VertexName::gadget(inner.label(), inner.index(),
                                  {VertexName::gadget("L", n)});
      });
      result.path_vertices.push_back(L.vertices());

      // subsets of the stage-n vertices by size, then lexicographically
      std::vector<VertexName> pool = current;
      normalise(pool);
      std::vector<VertexName> xs;
      std::uint64_t const     k = std::min<std::uint64_t>(caps.subset_cap, pool.size());
      std::uint64_t           i = 0;
      for (std::uint64_t size = 0; size <= k; ++size) {
        std::vector<std::size_t> pick(size);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
          if (i >= caps.max_new_vertices) {
            throw CapExceeded("schutz_pair stage " + std::to_string(n + 1)
                              + " needs more than "
                              + std::to_string(caps.max_new_vertices)
                              + " witness vertices; lower the subset cap");
          }
          VertexName x = VertexName::witness(n + 1, i++);
          xs.push_back(x);
          for (auto p : pick) {
            star.emplace_back(pool[p], x);
          }
          std::size_t j = size;
          while (j > 0 && pick[j - 1] == pool.size() - size + j - 1) {
            --j;
          }
          if (j == 0) {
            break;
          }
          ++pick[j - 1];
          for (std::size_t t = j; t < size; ++t) {
            pick[t] = pick[t - 1] + 1;
          }
        }
      }
      result.x_vertices.push_back(xs);
      for (auto const& v : L.vertices()) {
        current.push_back(v);
      }
      current.insert(current.end(), xs.begin(), xs.end());
    }
    all = current;
    for (auto const& v : all) {
      if (v.is_witness() && g.contains(v)) {
        throw PreconditionError("vertex names of g collide with witness names");
      }
    }
    result.e_star = Structure::graph(all, star);

    // E_0: every pair except the four excluded families
    Structure                          full = result.e_star;
    std::map<VertexName, std::int64_t> family;  // n for L_{S_n} vertices
    std::map<VertexName, std::int64_t> xfamily;
    for (std::size_t n = 0; n < result.path_vertices.size(); ++n) {
      for (auto const& v : result.path_vertices[n]) {
        family[v] = static_cast<std::int64_t>(n);
      }
      for (auto const& v : result.x_vertices[n]) {
        xfamily[v] = static_cast<std::int64_t>(n);
      }
    }
    std::vector<Structure>                             copies;
    for (std::size_t n = 0; n < result.path_vertices.size(); ++n) {
      std::uint64_t N = caps.path_length.value_or(S_seq[n].max() + 2);
      copies.push_back(relabel(build_L(S_seq[n], N), [n](VertexName const& v) {
        return VertexName::gadget(v.label(), v.index(), {VertexName::gadget("L", n)});
      }));
    }
    std::vector<NamePair> zero;
    for (std::size_t a = 0; a < full.size(); ++a) {
      for (std::size_t b = a + 1; b < full.size(); ++b) {
        VertexName const& u = full.vertex(a);
        VertexName const& v = full.vertex(b);
        if (g.contains(u) && g.contains(v) && g.adjacent(u, v)) {
          continue;  // edges of g
        }
        auto xu = xfamily.find(u), xv = xfamily.find(v);
        auto lu = family.find(u), lv = family.find(v);
        if (xu != xfamily.end() && xv != xfamily.end() && xu->second == xv->second) {
          continue;  // x^{(n)} among themselves
        }
        if (lu != family.end() && lv != family.end() && lu->second == lv->second
            && copies[lu->second].adjacent(u, v)) {
          continue;  // edges of L_{S_n}
        }
        if ((lu != family.end() && xv != xfamily.end() && lu->second == xv->second)
            || (lv != family.end() && xu != xfamily.end()
                && lv->second == xu->second)) {
          continue;  // L_{S_n} to x^{(n)}
        }
        zero.emplace_back(u, v);
      }
    }
    result.e_zero = Structure::graph(all, zero);
    return result;
  }

}  // namespace forge
