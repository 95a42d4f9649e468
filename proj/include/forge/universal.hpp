#ifndef FORGE_UNIVERSAL_HPP_
#define FORGE_UNIVERSAL_HPP_

#include <cstdint>   // for uint64_t, uint8_t
#include <map>       // for map
#include <memory>    // for shared_ptr
#include <optional>  // for optional
#include <set>       // for set
#include <string>    // for string
#include <vector>    // for vector

#include "forge/structure.hpp"    // for Structure, Kind
#include "forge/vertex_name.hpp"  // for VertexName

namespace forge {

  ////////////////////////////////////////////////////////////////////////
  // Infinite index sets
  ////////////////////////////////////////////////////////////////////////

  // A set of naturals >= 2 that is periodic from some point on: the members
  // of prefix below start, together with every n >= start such that
  // (n - start) mod period lies in residues.  period == 0 means nothing at
  // or beyond start.
  class UltimatelyPeriodicSet {
   public:
    UltimatelyPeriodicSet() = default;
    UltimatelyPeriodicSet(std::set<std::uint64_t> prefix,
                          std::uint64_t           start,
                          std::uint64_t           period,
                          std::set<std::uint64_t> residues);
    static UltimatelyPeriodicSet finite(std::set<std::uint64_t> members);

    // "2,4" for a finite set; "2,4|6:3:0,1" for prefix {2,4} and every
    // n >= 6 with (n - 6) mod 3 in {0,1}.
    static UltimatelyPeriodicSet parse(std::string const& text);

    bool          contains(std::uint64_t n) const;
    std::uint64_t count_below(std::uint64_t n) const;  // members < n
    std::string   to_string() const;

   private:
    std::set<std::uint64_t> _prefix;
    std::uint64_t           _start  = 0;
    std::uint64_t           _period = 0;
    std::set<std::uint64_t> _residues;
  };

  ////////////////////////////////////////////////////////////////////////
  // Algebraically closed oracles
  ////////////////////////////////////////////////////////////////////////

  // A lazily presented, possibly infinite, algebraically closed structure.
  //
  // For bipartite structures the set A passed to witness and multiplicity
  // lies inside one part and part is the part of the requested witness.
  // For digraphs a witness is joined to A by arcs in both directions.
  class ACOracle {
   public:
    virtual ~ACOracle() = default;

    virtual Kind kind() const = 0;
    // Number of vertices; empty when infinite.
    virtual std::optional<std::uint64_t> size() const = 0;
    // The i-th vertex of the enumeration.
    virtual VertexName vertex(std::uint64_t i) const = 0;
    // Position in the enumeration; empty for non-members.
    virtual std::optional<std::uint64_t> position(VertexName const& v) const = 0;
    bool contains(VertexName const& v) const {
      return position(v).has_value();
    }
    virtual bool adjacent(VertexName const& u, VertexName const& v) const = 0;
    virtual int  part(VertexName const&) const {
      return 0;
    }
    // Number of distinct witnesses for A; empty when unbounded.
    virtual std::optional<std::uint64_t>
    multiplicity(std::vector<VertexName> const& A, int part = 0) const = 0;
    // The j-th witness for A.  Throws CoverageError when j is out of range.
    virtual VertexName witness(std::vector<VertexName> const& A,
                               std::uint64_t                  j,
                               int                            part = 0) const = 0;
  };

  // A finite structure viewed as an oracle; witnesses are the common
  // neighbours in VertexName order.
  class FiniteOracle : public ACOracle {
   public:
    explicit FiniteOracle(Structure s);

    Structure const& structure() const noexcept {
      return _s;
    }
    Kind kind() const override {
      return _s.kind();
    }
    std::optional<std::uint64_t> size() const override {
      return _s.size();
    }
    VertexName vertex(std::uint64_t i) const override;
    std::optional<std::uint64_t> position(VertexName const& v) const override;
    bool adjacent(VertexName const& u, VertexName const& v) const override;
    int  part(VertexName const& v) const override;
    std::optional<std::uint64_t>
    multiplicity(std::vector<VertexName> const& A, int part = 0) const override;
    VertexName witness(std::vector<VertexName> const& A,
                       std::uint64_t                  j,
                       int                            part = 0) const override;

   private:
    std::vector<VertexName> common(std::vector<VertexName> const& A, int part) const;
    Structure               _s;
  };

  // Complement of g disjoint-union the infinite L_S.  Vertices are g's
  // (sorted) followed by l_0, v_0, l_1, v_1, ... where v_n is present iff n
  // is in S.  The L_S names are wrapped as g:L.0(...) when they collide with
  // names of g.
  class DeltaOracle : public ACOracle {
   public:
    DeltaOracle(Structure g, UltimatelyPeriodicSet S);

    Kind kind() const override {
      return Kind::graph;
    }
    std::optional<std::uint64_t> size() const override {
      return std::nullopt;
    }
    VertexName vertex(std::uint64_t i) const override;
    std::optional<std::uint64_t> position(VertexName const& v) const override;
    bool adjacent(VertexName const& u, VertexName const& v) const override;
    std::optional<std::uint64_t>
    multiplicity(std::vector<VertexName> const&, int = 0) const override {
      return std::nullopt;
    }
    // l_{base + j} where base is 0 if A has no L_S vertex and the largest
    // index of an L_S vertex of A plus 2 otherwise.
    VertexName witness(std::vector<VertexName> const& A,
                       std::uint64_t                  j,
                       int                            part = 0) const override;

    Structure const& base() const noexcept {
      return _g;
    }
    UltimatelyPeriodicSet const& index_set() const noexcept {
      return _S;
    }
    VertexName path(std::uint64_t n) const;
    VertexName pendant(std::uint64_t n) const;

   private:
    struct LVertex {
      bool          pendant;
      std::uint64_t n;
    };
    std::optional<LVertex> decode(VertexName const& v) const;

    Structure             _g;
    UltimatelyPeriodicSet _S;
    bool                  _wrap = false;
  };

  // The blowup with r copies of another oracle: vertex g:b.s(x) for every
  // vertex x of the inner oracle and s < r.
  class SharpOracle : public ACOracle {
   public:
    SharpOracle(std::shared_ptr<ACOracle const> inner, std::uint64_t r);

    Kind kind() const override {
      return _inner->kind();
    }
    std::optional<std::uint64_t> size() const override;
    VertexName vertex(std::uint64_t i) const override;
    std::optional<std::uint64_t> position(VertexName const& v) const override;
    bool adjacent(VertexName const& u, VertexName const& v) const override;
    int  part(VertexName const& v) const override;
    std::optional<std::uint64_t>
    multiplicity(std::vector<VertexName> const& A, int part = 0) const override;
    VertexName witness(std::vector<VertexName> const& A,
                       std::uint64_t                  j,
                       int                            part = 0) const override;

    std::uint64_t copies() const noexcept {
      return _r;
    }

   private:
    std::vector<VertexName> bases(std::vector<VertexName> const& A) const;

    std::shared_ptr<ACOracle const> _inner;
    std::uint64_t                   _r;
  };

  std::shared_ptr<DeltaOracle const> lazy_delta(Structure const&             g,
                                                UltimatelyPeriodicSet const& S);

  ////////////////////////////////////////////////////////////////////////
  // Stage plans
  ////////////////////////////////////////////////////////////////////////

  // Whether stage s >= 2 schedules every subset of the current vertices
  // again (as the witness operators do), or only the subsets meeting the
  // vertices added at stage s - 1.
  enum class Reenumeration : std::uint8_t { every_subset, fresh_only };

  struct StagePlan {
    std::uint64_t                stages = 1;
    std::optional<std::uint64_t> subset_cap;  // empty: all sizes
    // Per-stage overrides of subset_cap; a mapped empty value lifts the cap.
    std::map<std::uint64_t, std::optional<std::uint64_t>> stage_caps;
    Reenumeration mode = Reenumeration::every_subset;

    std::optional<std::uint64_t> cap(std::uint64_t stage) const;
  };

  ////////////////////////////////////////////////////////////////////////
  // Scheduled items
  ////////////////////////////////////////////////////////////////////////

  // Labels of item members for digraphs: the witness has an arc to the
  // member (out), from it (in), or both.  Graph and bipartite items use
  // label 0 only.
  enum ArcLabel : std::uint8_t { arc_out = 0, arc_in = 1, arc_both = 2 };

  // Label masks for constraints: bit l allows label l.
  inline constexpr std::uint8_t kAnyLabel = 0b111;
  inline constexpr std::uint8_t label_bit(std::uint8_t l) {
    return static_cast<std::uint8_t>(1U << l);
  }

  // The scheduled subset (or triple, or per-part subset) of a witness.
  // Members are sorted; labels[i] belongs to members[i].
  struct Item {
    std::vector<VertexName>   members;
    std::vector<std::uint8_t> labels;
    int                       part = 0;  // part of the witness
  };

  // Requirement that an item contains v with a label allowed by mask.
  struct Constraint {
    VertexName   v;
    std::uint8_t mask = kAnyLabel;
  };

  ////////////////////////////////////////////////////////////////////////
  // LazyLimit
  ////////////////////////////////////////////////////////////////////////

  // The union of the stages obtained from a seed by repeatedly applying the
  // witness operator for its kind.
  //
  // Stage 0 is the seed: a finite structure, or a finite window (the first
  // vertices in enumeration order) of an oracle.  Every vertex of the
  // oracle belongs to stage 0 for adjacency purposes, but only the window
  // takes part in scheduling.  Stage s adds Witness(offset + s, i) for the
  // i-th scheduled item, where offset is the largest stage rank among the
  // seed names.  Items are ordered by size, then lexicographically by the
  // positions of their members in the sorted current vertex list, then (for
  // digraphs) by their label vector read as a base-3 numeral.  For
  // bipartite structures subsets of part 0 come first (their witnesses lie
  // in part 1), followed by subsets of part 1.
  //
  // Nothing is materialised: items are ranked and unranked in closed form,
  // so adjacency queries are cheap even when a stage has astronomically
  // many vertices.  Construction throws CapExceeded if some stage has more
  // than 2^62 witnesses.  Values are immutable and safe to share.
  class LazyLimit {
   public:
    static std::shared_ptr<LazyLimit const> over(Structure seed, StagePlan plan);
    static std::shared_ptr<LazyLimit const> over(std::shared_ptr<ACOracle const> oracle,
                                                 std::uint64_t                   window,
                                                 StagePlan                       plan);

    ~LazyLimit();

    Kind kind() const noexcept {
      return _kind;
    }
    StagePlan const& plan() const noexcept {
      return _plan;
    }
    std::uint64_t stages() const noexcept {
      return _plan.stages;
    }
    std::uint64_t offset() const noexcept {
      return _offset;
    }
    // The seed for finite seeds, the window otherwise (as an induced
    // structure).
    Structure const& seed() const noexcept {
      return _seed;
    }
    std::shared_ptr<ACOracle const> const& oracle() const noexcept {
      return _oracle;
    }

    bool contains(VertexName const& v) const;
    // 0 for seed and oracle vertices.  Throws PreconditionError for
    // non-vertices.
    std::uint64_t stage_of(VertexName const& v) const;
    // Number of witnesses added at stage s >= 1.
    std::uint64_t stage_count(std::uint64_t s) const;
    // |vertices_up_to(n)|.
    std::uint64_t size_up_to(std::uint64_t n) const;
    // Sorted; throws CapExceeded beyond limit vertices.
    std::vector<VertexName> vertices_up_to(std::uint64_t n,
                                           std::uint64_t limit = 1U << 22) const;
    // The induced finite structure on vertices_up_to(n).
    Structure stage_structure(std::uint64_t n, std::uint64_t limit = 1U << 16) const;

    // Arc test (edge test for graphs and bipartite graphs).
    bool adjacent(VertexName const& u, VertexName const& v) const;
    int  part(VertexName const& v) const;

    Item item(VertexName const& w) const;
    // The witness at stage s scheduled for the given item; empty if the
    // item is not scheduled there.
    std::optional<VertexName> witness_for(std::uint64_t s, Item const& item) const;

    // Witnesses of stage s in the given part whose items satisfy every
    // constraint and avoid every forbidden vertex, in index order.
    std::uint64_t count_items(std::uint64_t                  s,
                              int                            part,
                              std::vector<Constraint> const& required,
                              std::vector<VertexName> const& forbidden) const;
    std::optional<VertexName> nth_item(std::uint64_t                  s,
                                       int                            part,
                                       std::vector<Constraint> const& required,
                                       std::vector<VertexName> const& forbidden,
                                       std::uint64_t                  j) const;

    // Global serial number of a witness in stage-major order.
    std::uint64_t serial(VertexName const& w) const;

    struct Impl;

   private:
    LazyLimit() = default;
    void init();

    Kind                            _kind = Kind::graph;
    StagePlan                       _plan;
    std::uint64_t                   _offset = 0;
    Structure                       _seed;
    std::shared_ptr<ACOracle const> _oracle;
    std::unique_ptr<Impl>           _impl;
  };

  ////////////////////////////////////////////////////////////////////////
  // Eager stages
  ////////////////////////////////////////////////////////////////////////

  struct StageSchedule {
    std::optional<std::uint64_t> subset_cap;
    // Schedule only items containing one of the fresh vertices.
    bool                         fresh_only = false;
    std::optional<std::uint64_t> max_items;  // truncation bound
    // Stage rank of the new witness names; default one above current.
    std::optional<std::uint64_t> name_stage;
  };

  struct StageResult {
    Structure               structure;
    std::vector<VertexName> added;
    bool                    truncated = false;  // stopped at max_items
  };

  // One application of the witness operator.  New vertices are named
  // Witness(r + 1, i) where r is the largest stage rank in current, unless
  // the schedule names the stage.  This
  // enumerates items directly and is independent of LazyLimit's ranking.
  StageResult witness_stage(Structure const&                      current,
                            StageSchedule const&                  schedule,
                            std::vector<VertexName> const&        fresh = {});

  // The stages 0..n of a limit over a finite seed, built eagerly.
  Structure eager_stage(Structure const& seed, StagePlan const& plan, std::uint64_t n);

  ////////////////////////////////////////////////////////////////////////
  // Existential closure
  ////////////////////////////////////////////////////////////////////////

  // Least vertex (in VertexName order) outside U and V that is adjacent to
  // every vertex of U and to no vertex of V.  Throws CoverageError if the
  // plan's stages hold no such vertex.
  VertexName find_ec_witness(LazyLimit const&               L,
                             std::vector<VertexName> const& U,
                             std::vector<VertexName> const& V);

  // Digraph one-point extension type: the new vertex has exactly an arc to
  // each out vertex, from each in vertex, both arcs with each both vertex
  // and no arc with each none vertex.
  struct DigraphType {
    std::vector<VertexName> out;
    std::vector<VertexName> in;
    std::vector<VertexName> both;
    std::vector<VertexName> none;
  };
  VertexName find_ec_witness(LazyLimit const& L, DigraphType const& type);

  // Bipartite version: the new vertex lies in part and is adjacent exactly
  // to U (inside the other part) among U and V.
  VertexName find_ec_witness_bipartite(LazyLimit const&               L,
                                       int                            part,
                                       std::vector<VertexName> const& U,
                                       std::vector<VertexName> const& V);

}  // namespace forge

#endif  // FORGE_UNIVERSAL_HPP_
