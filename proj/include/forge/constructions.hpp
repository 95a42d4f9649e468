#ifndef FORGE_CONSTRUCTIONS_HPP_
#define FORGE_CONSTRUCTIONS_HPP_

#include <cstdint>           // for uint64_t
#include <functional>        // for function
#include <initializer_list>  // for initializer_list
#include <optional>          // for optional
#include <set>               // for set
#include <string>            // for string
#include <string_view>       // for string_view
#include <vector>            // for vector

#include "forge/structure.hpp"    // for Structure, VertexMap
#include "forge/vertex_name.hpp"  // for VertexName

namespace forge {

  // A finite set of naturals, each at least 2.
  class IndexSet {
   public:
    IndexSet() = default;
    IndexSet(std::initializer_list<std::uint64_t> values);
    explicit IndexSet(std::set<std::uint64_t> values);

    // "2,4,5"; the empty string gives the empty set.
    static IndexSet parse(std::string_view text);

    bool contains(std::uint64_t n) const {
      return _values.count(n) != 0;
    }
    bool empty() const noexcept {
      return _values.empty();
    }
    std::set<std::uint64_t> const& values() const noexcept {
      return _values;
    }
    // 0 for the empty set.
    std::uint64_t max() const noexcept {
      return _values.empty() ? 0 : *_values.rbegin();
    }
    IndexSet    shifted(std::uint64_t k) const;
    bool        subset_of(IndexSet const& other) const;
    std::string to_string() const;

    bool operator==(IndexSet const&) const = default;

   private:
    std::set<std::uint64_t> _values;
  };

  // Receives warnings such as ignored members of S; the default writes to
  // stderr.  Pass an empty function to restore the default.
  void set_warning_handler(std::function<void(std::string const&)> handler);
  void warn(std::string const& message);

  // ---- names used by the constructions -----------------------------------

  VertexName path_vertex(std::uint64_t n);     // l_n
  VertexName pendant_vertex(std::uint64_t n);  // v_n
  VertexName apex_vertex(std::uint64_t i);     // x_i of M_S and N_S
  VertexName co_apex_vertex(std::uint64_t i);  // y_i of N_S
  VertexName blowup_vertex(VertexName const& base, std::uint64_t r);
  VertexName midpoint_vertex(VertexName const& u, VertexName const& v);

  // Wraps every vertex name as g:<label>.<index>(original).
  Structure tagged(Structure const& g, std::string const& label, std::uint64_t index = 0);

  // ---- L_S, M_S, N_S and relatives ---------------------------------------

  // Path l_0 .. l_N with a pendant v_n on l_n for every n in S with n <= N.
  Structure build_L(IndexSet const& S, std::uint64_t N);
  // Same, each edge replaced by two opposite arcs.
  Structure build_L_directed(IndexSet const& S, std::uint64_t N);
  // Bipartite L_S: l_n in part n mod 2, v_n in part (n + 1) mod 2.
  Structure build_Lambda(IndexSet const& S, std::uint64_t N);

  // L_S plus K apex vertices joined to every other vertex.
  Structure build_M(IndexSet const& S, std::uint64_t N, std::uint64_t K);
  // Lambda_S plus x_0..x_{K-1} in part 0 joined to all of part 1, and
  // y_0..y_{K-1} in part 1 joined to all of part 0.
  Structure build_N(IndexSet const& S, std::uint64_t N, std::uint64_t K);

  // Replaces each arc (u, v) by the path u - x - y - v with a pendant z on
  // y.  The result is an undirected graph.
  Structure dashv(Structure const& d);

  // Bipartite graph with the old vertices in part 0 and one midpoint per
  // edge, joined to the edge's endpoints, in part 1.
  Structure prime(Structure const& g);

  // r copies of every vertex; copies of u and v are adjacent iff u and v
  // are.  Parts are inherited for bipartite input.
  Structure blowup(Structure const& g, std::uint64_t r);

  // Recovers the base vertices (sorted) and r from a blowup.
  std::vector<VertexName> blowup_base(Structure const& sharp, std::uint64_t* r = nullptr);

  // v_{i,s} -> v_{i,b_i}; b is indexed by the sorted base vertices.
  VertexMap phi_b(Structure const& sharp, std::vector<std::uint64_t> const& b);
  // v_{i,s} -> v_{i,(s + b_i) mod r}.
  VertexMap psi_b(Structure const& sharp, std::vector<std::uint64_t> const& b);
  // The vertices v_{i,b_i}.
  std::vector<VertexName> diagonal(Structure const& sharp,
                                   std::vector<std::uint64_t> const& b);

  // Complement of g disjoint-union L_S truncated at N.  L_S names are
  // wrapped if they collide with names of g.
  Structure delta_construction(Structure const& g, IndexSet const& S, std::uint64_t N);

  // Injective map l_n -> l_{n+k}, v_n -> v_{n+k} from build_L(S, N) into
  // build_L(T, N + k).
  VertexMap translate_map(IndexSet const& S, std::uint64_t N, std::uint64_t k);

  // ---- the Schutzenberger witness pair ------------------------------------

  struct SchutzCaps {
    std::uint64_t subset_cap = 2;  // largest subset receiving an x vertex
    // Truncation N of each L_{S_n}; default max(S_n) + 2.
    std::optional<std::uint64_t> path_length;
    std::uint64_t max_new_vertices = 1U << 16;  // per stage
  };

  struct SchutzPair {
    Structure e_star;  // (V*, E*)
    Structure e_zero;  // (V*, E_0)
    // The L_{S_n} copy and the x^{(n)} vertices added at each stage.
    std::vector<std::vector<VertexName>> path_vertices;
    std::vector<std::vector<VertexName>> x_vertices;
  };

  // Vertex names: g's own names, g:l.m(g:L.n) / g:v.m(g:L.n) for the copy of
  // L_{S_n}, and w<n+1>.<i> for x^{(n)}_i, the witness of the i-th subset
  // of the stage-n vertices in (size, VertexName-lexicographic) order.
  SchutzPair schutz_pair(Structure const&             g,
                         std::vector<IndexSet> const& S_seq,
                         std::uint64_t                stages,
                         SchutzCaps const&            caps = {});

}  // namespace forge

#endif  // FORGE_CONSTRUCTIONS_HPP_
