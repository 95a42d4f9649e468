#ifndef FORGE_STRUCTURE_HPP_
#define FORGE_STRUCTURE_HPP_

#include <cstddef>        // for size_t
#include <cstdint>        // for uint64_t, uint8_t
#include <map>            // for map
#include <optional>       // for optional
#include <string>         // for string
#include <unordered_map>  // for unordered_map
#include <utility>        // for pair
#include <vector>         // for vector

#include "forge/vertex_name.hpp"  // for VertexName, VertexNameHash

namespace forge {

  enum class Kind : std::uint8_t { graph, digraph, bipartite };

  std::string to_string(Kind k);
  Kind        kind_from_string(std::string const& s);

  using NamePair = std::pair<VertexName, VertexName>;

  // Packed square bit matrix.
  class BitMatrix {
   public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n) : _n(n), _words((n + 63) / 64), _bits(n * _words, 0) {}

    bool get(std::size_t i, std::size_t j) const noexcept {
      return (_bits[i * _words + j / 64] >> (j % 64)) & 1U;
    }
    void set(std::size_t i, std::size_t j, bool value = true) noexcept {
      std::uint64_t mask = std::uint64_t(1) << (j % 64);
      if (value) {
        _bits[i * _words + j / 64] |= mask;
      } else {
        _bits[i * _words + j / 64] &= ~mask;
      }
    }
    std::size_t size() const noexcept {
      return _n;
    }
    bool operator==(BitMatrix const&) const = default;

   private:
    std::size_t                _n     = 0;
    std::size_t                _words = 0;
    std::vector<std::uint64_t> _bits;
  };

  // A finite graph, directed graph or bipartite graph.
  //
  // Vertices are kept sorted in VertexName order and addressed either by
  // name or by position.  Graphs and bipartite graphs store a symmetric
  // relation, digraphs an arbitrary irreflexive one.  A bipartite graph
  // also records the part (0 or 1) of every vertex; the partition relation
  // P of the relational view is derived from it.  Values are immutable.
  class Structure {
   public:
    Structure() = default;

    static Structure graph(std::vector<VertexName>      vertices,
                           std::vector<NamePair> const& edges);
    static Structure digraph(std::vector<VertexName>      vertices,
                             std::vector<NamePair> const& arcs);
    static Structure bipartite(std::vector<VertexName>          vertices,
                               std::map<VertexName, int> const& parts,
                               std::vector<NamePair> const&     edges);

    Kind kind() const noexcept {
      return _kind;
    }
    std::size_t size() const noexcept {
      return _vertices.size();
    }
    std::vector<VertexName> const& vertices() const noexcept {
      return _vertices;
    }
    VertexName const& vertex(std::size_t i) const {
      return _vertices.at(i);
    }

    std::optional<std::size_t> find(VertexName const& v) const;
    // Throws PreconditionError for unknown vertices.
    std::size_t index_of(VertexName const& v) const;
    bool        contains(VertexName const& v) const {
      return find(v).has_value();
    }

    // Arc test; symmetric for graphs and bipartite graphs.
    bool adjacent(std::size_t u, std::size_t v) const noexcept {
      return _adj.get(u, v);
    }
    bool adjacent(VertexName const& u, VertexName const& v) const;

    // Part of a vertex; always 0 unless bipartite.
    int part(std::size_t i) const noexcept {
      return _parts.empty() ? 0 : _parts[i];
    }
    int part(VertexName const& v) const {
      return part(index_of(v));
    }
    // Whether two vertices are related by the partition relation P.
    bool same_part(std::size_t u, std::size_t v) const noexcept {
      return part(u) == part(v);
    }

    std::vector<std::size_t> out_neighbours(std::size_t i) const;
    std::vector<std::size_t> in_neighbours(std::size_t i) const;
    std::size_t              degree(std::size_t i) const;

    // Unordered edges as (smaller, larger) for graphs and bipartite graphs;
    // arcs for digraphs.  Sorted.
    std::vector<NamePair> edges() const;
    std::size_t           edge_count() const;

    BitMatrix const& matrix() const noexcept {
      return _adj;
    }

    bool operator==(Structure const& other) const;

   private:
    Structure(Kind kind, std::vector<VertexName> vertices);
    void add_pair(NamePair const& e, bool symmetric);

    Kind                    _kind = Kind::graph;
    std::vector<VertexName> _vertices;
    std::unordered_map<VertexName, std::size_t, VertexNameHash> _index;
    std::vector<std::uint8_t> _parts;
    BitMatrix                 _adj;
  };

  // A total assignment of vertex names.  Domain and codomain are passed
  // explicitly to the checking functions.
  class VertexMap {
   public:
    VertexMap() = default;
    explicit VertexMap(std::map<VertexName, VertexName> assignment)
        : _assignment(std::move(assignment)) {}

    void set(VertexName const& from, VertexName const& to) {
      _assignment[from] = to;
    }
    // Throws PreconditionError when from is not in the domain.
    VertexName const& operator()(VertexName const& from) const;
    bool              defines(VertexName const& from) const {
      return _assignment.count(from) != 0;
    }
    std::size_t size() const noexcept {
      return _assignment.size();
    }
    std::map<VertexName, VertexName> const& assignment() const noexcept {
      return _assignment;
    }
    bool operator==(VertexMap const&) const = default;

   private:
    std::map<VertexName, VertexName> _assignment;
  };

  VertexMap identity_map(Structure const& s);
  // First apply first, then second.
  VertexMap then(VertexMap const& first, VertexMap const& second);
  bool      is_injective(VertexMap const& m);

  // ---- elementary operations -------------------------------------------

  Structure complement(Structure const& g);
  Structure bipartite_complement(Structure const& b);

  enum class PartPairing : std::uint8_t { same, swapped };
  Structure disjoint_union(Structure const& g,
                           Structure const& h,
                           PartPairing      pairing = PartPairing::same);
  Structure induced(Structure const& g, std::vector<VertexName> const& subset);
  // Applies rename to every vertex; rename must be injective.
  template <typename F>
  Structure relabel(Structure const& g, F&& rename);

  // ---- homomorphisms -----------------------------------------------------

  // Both functions throw PreconditionError if m is not total on the domain,
  // sends a vertex outside the codomain, or the kinds differ.
  bool is_homomorphism(Structure const& dom,
                       Structure const& cod,
                       VertexMap const& m);
  bool is_embedding(Structure const& dom, Structure const& cod, VertexMap const& m);

  using Partition = std::vector<std::vector<VertexName>>;

  // Classes ordered by least member, members sorted.
  Partition kernel(Structure const& dom, VertexMap const& m);

  struct ImageReport {
    std::vector<VertexName> vertices;        // Vf
    std::vector<NamePair>   relation_image;  // Ef, in the format of edges()
    Structure               induced;         // <Vf>
    bool                    equal = false;   // Ef coincides with <Vf>
  };

  ImageReport image_subgraph(Structure const& dom,
                             Structure const& cod,
                             VertexMap const& m);

  // ---- automorphisms -----------------------------------------------------

  // All automorphisms, sorted by image list.  Throws CapExceeded when
  // g.size() > cap.  For bipartite graphs the partition relation must be
  // preserved, so part swaps are allowed.
  std::vector<VertexMap> automorphisms(Structure const& g,
                                       std::optional<std::size_t> cap = {});
  std::size_t count_automorphisms(Structure const& g,
                                  std::optional<std::size_t> cap = {});
  std::optional<VertexMap> isomorphism(Structure const& g,
                                       Structure const& h,
                                       std::optional<std::size_t> cap = {});
  bool isomorphic(Structure const& g,
                  Structure const& h,
                  std::optional<std::size_t> cap = {});

  // ---- algebraic closure proxy ------------------------------------------

  struct AcOptions {
    std::size_t                min_witnesses = 1;
    std::optional<std::size_t> subset_cap;     // default: all sizes
    std::optional<std::vector<VertexName>> subset_pool;   // default: all vertices
    std::optional<std::vector<VertexName>> witness_pool;  // default: all vertices
  };

  struct AcReport {
    bool                    ok = true;
    std::vector<VertexName> failing_subset;  // smallest failing subset
    std::size_t             witnesses = 0;   // witnesses of failing_subset
    std::size_t             subsets_checked = 0;
  };

  // Checks that every subset A (within one part for bipartite graphs) of
  // size at most the cap has at least min_witnesses common neighbours
  // (common in-and-out neighbours for digraphs).  Subsets are scanned by
  // size, then lexicographically, so the reported failure is the least one.
  AcReport ac_check(Structure const& g, AcOptions const& options = {});

  // Connected components of the underlying undirected graph, as vertex
  // lists ordered by least member.
  Partition components(Structure const& g);

  // ---- template implementation -------------------------------------------

  template <typename F>
  Structure relabel(Structure const& g, F&& rename) {
    std::vector<VertexName>                vertices;
    std::map<VertexName, VertexName>       fwd;
    for (auto const& v : g.vertices()) {
      VertexName w = rename(v);
      fwd.emplace(v, w);
      vertices.push_back(std::move(w));
    }
    std::vector<NamePair> edges;
    for (auto const& [u, v] : g.edges()) {
      edges.emplace_back(fwd.at(u), fwd.at(v));
    }
    switch (g.kind()) {
      case Kind::graph:
        return Structure::graph(std::move(vertices), edges);
      case Kind::digraph:
        return Structure::digraph(std::move(vertices), edges);
      case Kind::bipartite: {
        std::map<VertexName, int> parts;
        for (std::size_t i = 0; i < g.size(); ++i) {
          parts[fwd.at(g.vertex(i))] = g.part(i);
        }
        return Structure::bipartite(std::move(vertices), parts, edges);
      }
    }
    return {};
  }

}  // namespace forge

#endif  // FORGE_STRUCTURE_HPP_
