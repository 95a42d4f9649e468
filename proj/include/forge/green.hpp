#ifndef FORGE_GREEN_HPP_
#define FORGE_GREEN_HPP_

#include <cstddef>   // for size_t
#include <cstdint>   // for uint16_t, uint32_t, uint64_t
#include <optional>  // for optional
#include <string>    // for string
#include <vector>    // for vector

#include "forge/config.hpp"     // for kEndomorphismCap, kMonoidCap
#include "forge/structure.hpp"  // for Structure, VertexMap

namespace forge {

  // A self-map of a structure's vertex set, as the list of image positions.
  using Transformation = std::vector<std::uint32_t>;

  // A finite monoid of transformations of a structure's vertex set.
  //
  // Elements are sorted lexicographically by image list.  Products follow
  // the convention of maps written on the right: product(f, g) is "first
  // f, then g", so Mf is the left ideal and fM the right ideal of f.
  class FiniteMonoid {
   public:
    // Throws PreconditionError if the identity is missing or the elements
    // are not closed under composition, and CapExceeded if there are more
    // than element_cap elements.  Duplicates are removed.
    FiniteMonoid(Structure                   g,
                 std::vector<Transformation> elements,
                 std::size_t                 element_cap = kMonoidCap);

    Structure const& structure() const noexcept {
      return _g;
    }
    std::size_t size() const noexcept {
      return _elements.size();
    }
    std::vector<Transformation> const& elements() const noexcept {
      return _elements;
    }
    Transformation const& element(std::size_t i) const {
      return _elements.at(i);
    }
    std::size_t identity() const noexcept {
      return _identity;
    }
    std::size_t product(std::size_t f, std::size_t g) const noexcept {
      return _table[f * _elements.size() + g];
    }

    std::optional<std::size_t> find(Transformation const& t) const;
    // Throws PreconditionError if m is not an element.
    std::size_t index_of(VertexMap const& m) const;
    VertexMap   as_map(std::size_t i) const;

    // Sorted image positions and the kernel as a class label per vertex
    // (classes numbered by least member).
    std::vector<std::uint32_t> image(std::size_t i) const;
    std::vector<std::uint32_t> kernel_labels(std::size_t i) const;
    std::size_t                rank(std::size_t i) const {
      return image(i).size();
    }

   private:
    Structure                   _g;
    std::vector<Transformation> _elements;
    std::vector<std::uint16_t>  _table;
    std::size_t                 _identity = 0;
  };

  // All homomorphisms from dom to cod (the partition relation included for
  // bipartite graphs), sorted by image list.  Throws PreconditionError if
  // the kinds differ and CapExceeded if dom has more than vertex_cap
  // vertices.
  std::vector<Transformation> enumerate_homomorphisms(Structure const& dom,
                                                      Structure const& cod,
                                                      std::size_t vertex_cap
                                                      = cap_from_env(kEndomorphismCap));
  std::vector<VertexMap> homomorphisms(Structure const& dom,
                                       Structure const& cod,
                                       std::size_t vertex_cap = cap_from_env(kEndomorphismCap));

  // End(g) by backtracking.
  FiniteMonoid enumerate_endos(Structure const& g,
                               std::size_t vertex_cap = cap_from_env(kEndomorphismCap));

  // Class indices are numbered by least element.
  struct GreenData {
    std::vector<std::size_t>                L, R, H, D, J;
    std::vector<bool>                       idempotent;
    std::vector<bool>                       regular;
    std::vector<std::optional<std::size_t>> regular_witness;
    std::size_t L_count = 0, R_count = 0, H_count = 0, D_count = 0, J_count = 0;

    // Members of the class with the given index.
    std::vector<std::size_t> members(std::vector<std::size_t> const& relation,
                                     std::size_t                     cls) const;
  };

  GreenData green_relations(FiniteMonoid const& M);

  std::vector<std::size_t> idempotents(FiniteMonoid const& M);
  // A g with fgf = f: f itself for idempotents, otherwise the least one.
  std::optional<std::size_t> is_regular(FiniteMonoid const& M, std::size_t f);

  struct GroupTable {
    std::vector<std::size_t> elements;  // monoid indices, ascending
    std::vector<std::size_t> table;     // local indices, row-major
    std::size_t              identity = 0;
    std::size_t order() const noexcept {
      return elements.size();
    }
  };

  // The H-class of e with its multiplication.  Throws PreconditionError if
  // e is not idempotent and std::logic_error if the group axioms fail.
  GroupTable maximal_subgroup(FiniteMonoid const& M, std::size_t e);

  using Permutation = std::vector<std::size_t>;

  struct SchutzGroup {
    std::vector<std::size_t> h_class;       // monoid indices, ascending
    std::vector<std::size_t> stabiliser;    // T_H, ascending
    std::vector<Permutation> permutations;  // distinct gamma_t, sorted
    // For each member of T_H, the position of its gamma_t.
    std::vector<std::size_t> gamma_of;
    std::size_t order() const noexcept {
      return permutations.size();
    }
    bool is_group() const;
    // Sorted list of the sorted cycle lengths of every permutation.
    std::vector<std::vector<std::size_t>> cycle_profile() const;
  };

  // The Schützenberger group of the H-class of f.
  SchutzGroup schutzenberger(FiniteMonoid const& M, GreenData const& G, std::size_t f);

  struct ClaimResult {
    std::string                name;
    std::size_t                checked = 0;
    std::optional<std::string> counterexample;
  };

  struct ClaimReport {
    std::size_t              monoid_size = 0;
    std::vector<ClaimResult> claims;
    bool                     ok() const;
  };

  // Exhaustively checks the link between Green's relations on End(g) and
  // images, kernels, automorphism groups and Schützenberger groups.
  ClaimReport verify_monoid_claims(Structure const& g,
                                   std::size_t vertex_cap = cap_from_env(kEndomorphismCap));
  ClaimReport verify_monoid_claims(FiniteMonoid const& M, GreenData const& G);

}  // namespace forge

#endif  // FORGE_GREEN_HPP_
