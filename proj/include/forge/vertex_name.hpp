#ifndef FORGE_VERTEX_NAME_HPP_
#define FORGE_VERTEX_NAME_HPP_

#include <compare>      // for strong_ordering
#include <cstddef>      // for size_t
#include <cstdint>      // for uint64_t
#include <string>       // for string
#include <string_view>  // for string_view
#include <vector>       // for vector

namespace forge {

  // Hierarchical vertex identifier.
  //
  // Three flavours exist:
  //  * seed vertices, either numbered ("s3") or carrying a user label ("a");
  //  * witness vertices added by a construction stage ("w2.15" is the
  //    witness with schedule index 15 added at stage 2);
  //  * gadget vertices, local to a construction, with a label, an index
  //    and optional parent names ("g:l.4", "g:x.0(a,b)").
  //
  // Names are totally ordered by stage rank first (0 for seeds and
  // gadgets, the stage for witnesses), then by flavour (seed < witness <
  // gadget), then by their fields.  All "least vertex" choices in the
  // library refer to this order.
  class VertexName {
   public:
    enum class Tag : std::uint8_t { seed = 0, witness = 1, gadget = 2 };

    VertexName() = default;

    static VertexName seed(std::uint64_t index);
    static VertexName named(std::string label);
    static VertexName witness(std::uint64_t stage, std::uint64_t index);
    static VertexName gadget(std::string              label,
                             std::uint64_t            index,
                             std::vector<VertexName> parents = {});

    // Inverse of to_string; throws ParseError.
    static VertexName parse(std::string_view text);

    Tag tag() const noexcept {
      return _tag;
    }
    bool is_seed() const noexcept {
      return _tag == Tag::seed;
    }
    bool is_witness() const noexcept {
      return _tag == Tag::witness;
    }
    bool is_gadget() const noexcept {
      return _tag == Tag::gadget;
    }

    // 0 for seeds and gadgets, the stage for witnesses.
    std::uint64_t stage_rank() const noexcept {
      return _tag == Tag::witness ? _stage : 0;
    }
    std::uint64_t index() const noexcept {
      return _index;
    }
    std::string const& label() const noexcept {
      return _label;
    }
    std::vector<VertexName> const& parents() const noexcept {
      return _parents;
    }

    std::string to_string() const;

    friend std::strong_ordering operator<=>(VertexName const& x,
                                            VertexName const& y);
    friend bool operator==(VertexName const& x, VertexName const& y);

   private:
    Tag                     _tag   = Tag::seed;
    std::uint64_t           _stage = 0;
    std::uint64_t           _index = 0;
    std::string             _label;
    std::vector<VertexName> _parents;
  };

  struct VertexNameHash {
    std::size_t operator()(VertexName const& v) const noexcept;
  };

  // Sorts and removes duplicates.
  void normalise(std::vector<VertexName>& names);

  // Parses a comma separated list of names; empty input gives an empty list.
  std::vector<VertexName> parse_name_list(std::string_view text);

}  // namespace forge

#endif  // FORGE_VERTEX_NAME_HPP_
