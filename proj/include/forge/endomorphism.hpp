#ifndef FORGE_ENDOMORPHISM_HPP_
#define FORGE_ENDOMORPHISM_HPP_

#include <cstdint>     // for uint64_t, uint8_t
#include <functional>  // for function
#include <map>         // for map
#include <memory>      // for shared_ptr
#include <optional>    // for optional
#include <string>      // for string
#include <utility>     // for pair
#include <vector>      // for vector

#include "forge/constructions.hpp"  // for SchutzPair
#include "forge/structure.hpp"      // for Structure, VertexMap
#include "forge/universal.hpp"      // for LazyLimit, ACOracle

namespace forge {

  // Skip counts selecting among the qualifying vertices for each witness.
  //
  // The value for the witness with the given (stage, index) is looked up
  // in the overrides first.  Otherwise the witness's global serial number
  // (its position in stage-major order) indexes the prefix, or the
  // repeating pattern, falling back to a constant.
  class ChoiceSequence {
   public:
    ChoiceSequence() = default;

    static ChoiceSequence constant(std::uint64_t j);
    static ChoiceSequence periodic(std::vector<std::uint64_t> pattern);
    static ChoiceSequence prefix(std::vector<std::uint64_t> values,
                                 std::uint64_t              fallback = 0);
    // "3" (constant), "0,1,0" (prefix, then 0) or "periodic:0,1"; an
    // optional ";s.i=j;..." tail adds overrides.
    static ChoiceSequence parse(std::string const& text);

    ChoiceSequence& override_at(std::uint64_t stage, std::uint64_t index, std::uint64_t j);

    std::uint64_t operator()(std::uint64_t stage,
                             std::uint64_t index,
                             std::uint64_t serial) const;
    std::string   to_string() const;

   private:
    std::vector<std::uint64_t>                                       _values;
    bool                                                             _periodic = false;
    std::uint64_t                                                    _fallback = 0;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> _overrides;
  };

  enum class ExtensionMode : std::uint8_t {
    generic,
    image_preserving,
    automorphism_lift,
    idempotent,
    composite
  };
  std::string to_string(ExtensionMode m);

  // A map on the stage-0 vertices given by a rule rather than a table.
  using SeedRule = std::function<VertexName(VertexName const&)>;

  // An endomorphism of a LazyLimit, represented by the rule computing it.
  // Values are memoised; concurrent evaluation is safe and every call
  // returns the same value.
  class LimitEndomorphism {
   public:
    struct Impl;

    explicit LimitEndomorphism(std::shared_ptr<Impl const> impl);

    VertexName operator()(VertexName const& v) const;

    std::shared_ptr<LazyLimit const> const& base() const;
    ExtensionMode                           mode() const;

   private:
    std::shared_ptr<Impl const> _impl;
  };

  // Extension of a homomorphism f0 from the seed into the
  // limit.  The witness for item A at (stage, index) is sent to the
  // (j+1)-th vertex in VertexName order adjacent to every image of A (with
  // matching arc directions for digraphs and in the right part for
  // bipartite graphs), j being the choice value.  Strict mode also demands
  // adjacency to the images of the earlier witnesses of the same stage
  // (for bipartite graphs, those in the other part; for digraphs, arcs in
  // both directions).  Throws CoverageError when the plan's stages hold
  // too few qualifying vertices.
  LimitEndomorphism extend_hom(std::shared_ptr<LazyLimit const> L,
                               VertexMap const&                 f0,
                               ChoiceSequence                   choices = {},
                               bool                             strict  = true);
  LimitEndomorphism extend_hom(std::shared_ptr<LazyLimit const> L,
                               SeedRule                         f0,
                               ChoiceSequence                   choices = {},
                               bool                             strict  = true);

  // As extend_hom, but witnesses go to image.witness(images, j), so the
  // image never leaves the oracle.  The oracle must be the limit's own
  // oracle, or a FiniteOracle whose vertices belong to the limit's seed.
  LimitEndomorphism extend_hom_image_preserving(std::shared_ptr<LazyLimit const> L,
                                                VertexMap const&                 f0,
                                                std::shared_ptr<ACOracle const>  image,
                                                ChoiceSequence                   choices = {},
                                                bool                             strict = true);

  // Lift of a seed automorphism: the witness of A goes to the witness of
  // the image of A at the same stage.
  LimitEndomorphism extend_automorphism(std::shared_ptr<LazyLimit const> L,
                                        VertexMap const&                 g0);

  // The identity on the oracle (or finite seed), extended image-preservingly.
  LimitEndomorphism idempotent_onto(std::shared_ptr<LazyLimit const> L,
                                    ChoiceSequence                   choices = {},
                                    bool                             strict  = true);

  // First e1, then e2.
  LimitEndomorphism compose(LimitEndomorphism const& e1, LimitEndomorphism const& e2);

  // A finite map into a limit.
  struct PartialHom {
    Structure                        domain;
    VertexMap                        map;
    std::shared_ptr<LazyLimit const> target;
    std::uint64_t                    stage = 0;
  };

  // The restriction to vertices_up_to(n).
  PartialHom restrict(LimitEndomorphism const& e,
                      std::uint64_t            n,
                      std::uint64_t            limit = 1U << 16);

  bool check_homomorphism(PartialHom const& h);
  bool check_embedding(PartialHom const& h);

  struct IdempotenceReport {
    bool                      ok = true;
    std::optional<VertexName> counterexample;
    std::uint64_t             checked = 0;
  };
  IdempotenceReport verify_idempotent(LimitEndomorphism const& e,
                                      std::uint64_t            n,
                                      std::uint64_t            limit = 1U << 16);

  ////////////////////////////////////////////////////////////////////////
  // Greedy injective maps into the witness pair target
  ////////////////////////////////////////////////////////////////////////

  // The limit over (V*, E*) together with the larger relation E_0.  On the
  // seed E_0 is the pair's e_zero; a pair involving a limit witness is in
  // E_0 unless both are witnesses of the same stage.
  class SchutzTarget {
   public:
    SchutzTarget(SchutzPair pair, StagePlan plan);

    std::shared_ptr<LazyLimit const> const& limit() const noexcept {
      return _limit;
    }
    SchutzPair const& pair() const noexcept {
      return _pair;
    }
    bool adjacent_star(VertexName const& u, VertexName const& v) const;
    bool adjacent_zero(VertexName const& u, VertexName const& v) const;

   private:
    SchutzPair                       _pair;
    std::shared_ptr<LazyLimit const> _limit;
  };

  struct GreedyResult {
    PartialHom hom;
    // A pair of non-adjacent source vertices whose images are related by
    // E_0, if any.  Such a pair shows that the relation image is smaller
    // than the E_0-induced image.
    std::optional<NamePair> discrepancy;
  };

  // Maps the source vertices in order, each to the least vertex of the
  // target whose E*-adjacency to the earlier images matches the source
  // adjacency.  pins fixes the images of some vertices up front.
  GreedyResult greedy_injective_hom(Structure const&    source,
                                    SchutzTarget const& target,
                                    VertexMap const&    pins = {});

}  // namespace forge

#endif  // FORGE_ENDOMORPHISM_HPP_
