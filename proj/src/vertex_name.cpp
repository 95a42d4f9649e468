#include "forge/vertex_name.hpp"

#include <algorithm>   // for sort, unique, all_of
#include <charconv>    // for from_chars
#include <functional>  // for hash

#include "forge/errors.hpp"  // for ParseError, PreconditionError

namespace forge {

  namespace {
    bool is_label_char(char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')
             || (c >= '0' && c <= '9') || c == '_';
    }

    bool all_digits(std::string_view s) {
      return !s.empty()
             && std::all_of(s.begin(), s.end(), [](char c) {
                  return c >= '0' && c <= '9';
                });
    }

    bool valid_label(std::string_view s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), is_label_char);
    }

    std::uint64_t to_u64(std::string_view digits, std::string_view context) {
      std::uint64_t value = 0;
      auto [ptr, ec]
          = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw ParseError("bad number in vertex name \"" + std::string(context)
                         + "\"");
      }
      return value;
    }

    class NameParser {
     public:
      explicit NameParser(std::string_view text) : _text(text) {}

      VertexName name() {
        std::size_t      start = _pos;
        std::string_view word  = identifier();
        if (word == "g" && peek() == ':') {
          ++_pos;
          std::string_view label = identifier();
          expect('.');
          std::uint64_t           index = number();
          std::vector<VertexName> parents;
          if (peek() == '(') {
            ++_pos;
            parents.push_back(name());
            while (peek() == ',') {
              ++_pos;
              parents.push_back(name());
            }
            expect(')');
          }
          return VertexName::gadget(std::string(label), index, std::move(parents));
        }
        if (word.size() > 1 && word[0] == 's' && all_digits(word.substr(1))) {
          return VertexName::seed(to_u64(word.substr(1), _text));
        }
        if (word.size() > 1 && word[0] == 'w' && all_digits(word.substr(1))
            && peek() == '.') {
          ++_pos;
          std::uint64_t stage = to_u64(word.substr(1), _text);
          return VertexName::witness(stage, number());
        }
        if (word.empty()) {
          fail(start);
        }
        return VertexName::named(std::string(word));
      }

      bool done() const {
        return _pos == _text.size();
      }
      char peek() const {
        return _pos < _text.size() ? _text[_pos] : '\0';
      }
      void expect(char c) {
        if (peek() != c) {
          fail(_pos);
        }
        ++_pos;
      }
      [[noreturn]] void fail(std::size_t at) const {
        throw ParseError("malformed vertex name \"" + std::string(_text)
                         + "\" at offset " + std::to_string(at));
      }

     private:
      std::string_view identifier() {
        std::size_t start = _pos;
        while (_pos < _text.size() && is_label_char(_text[_pos])) {
          ++_pos;
        }
        return _text.substr(start, _pos - start);
      }

      std::uint64_t number() {
        std::size_t start = _pos;
        while (_pos < _text.size() && _text[_pos] >= '0' && _text[_pos] <= '9') {
          ++_pos;
        }
        if (start == _pos) {
          fail(start);
        }
        return to_u64(_text.substr(start, _pos - start), _text);
      }

      std::string_view _text;
      std::size_t      _pos = 0;
    };
  }  // namespace

  VertexName VertexName::seed(std::uint64_t index) {
    VertexName v;
    v._tag   = Tag::seed;
    v._index = index;
    return v;
  }

  VertexName VertexName::named(std::string label) {
    if (!valid_label(label)) {
      throw PreconditionError("seed labels must be non-empty and use only "
                              "[A-Za-z0-9_], got \""
                              + label + "\"");
    }
    if (label.size() > 1 && label[0] == 's' && all_digits(label.substr(1))) {
      throw PreconditionError("label \"" + label
                              + "\" is reserved for numbered seeds");
    }
    VertexName v;
    v._tag   = Tag::seed;
    v._label = std::move(label);
    return v;
  }

  VertexName VertexName::witness(std::uint64_t stage, std::uint64_t index) {
    if (stage == 0) {
      throw PreconditionError("witness stages start at 1");
    }
    VertexName v;
    v._tag   = Tag::witness;
    v._stage = stage;
    v._index = index;
    return v;
  }

  VertexName VertexName::gadget(std::string             label,
                                std::uint64_t           index,
                                std::vector<VertexName> parents) {
    if (!valid_label(label)) {
      throw PreconditionError("gadget labels must be non-empty and use only "
                              "[A-Za-z0-9_], got \""
                              + label + "\"");
    }
    VertexName v;
    v._tag     = Tag::gadget;
    v._index   = index;
    v._label   = std::move(label);
    v._parents = std::move(parents);
    return v;
  }

  VertexName VertexName::parse(std::string_view text) {
    NameParser p(text);
    VertexName v = p.name();
    if (!p.done()) {
      p.fail(0);
    }
    return v;
  }

  std::string VertexName::to_string() const {
    switch (_tag) {
      case Tag::seed:
        return _label.empty() ? "s" + std::to_string(_index) : _label;
      case Tag::witness:
        return "w" + std::to_string(_stage) + "." + std::to_string(_index);
      case Tag::gadget: {
        std::string out = "g:" + _label + "." + std::to_string(_index);
        if (!_parents.empty()) {
          out += '(';
          for (std::size_t i = 0; i < _parents.size(); ++i) {
            if (i != 0) {
              out += ',';
            }
            out += _parents[i].to_string();
          }
          out += ')';
        }
        return out;
      }
    }
    return {};
  }

  std::strong_ordering operator<=>(VertexName const& x, VertexName const& y) {
    if (auto c = x.stage_rank() <=> y.stage_rank(); c != 0) {
      return c;
    }
    if (auto c = x._tag <=> y._tag; c != 0) {
      return c;
    }
    switch (x._tag) {
      case VertexName::Tag::seed: {
        // numbered seeds precede labelled ones
        if (auto c = !x._label.empty() <=> !y._label.empty(); c != 0) {
          return c;
        }
        if (auto c = x._index <=> y._index; c != 0) {
          return c;
        }
        return x._label.compare(y._label) <=> 0;
      }
      case VertexName::Tag::witness:
        return x._index <=> y._index;
      case VertexName::Tag::gadget: {
        if (auto c = x._parents <=> y._parents; c != 0) {
          return c;
        }
        if (auto c = x._label.compare(y._label) <=> 0; c != 0) {
          return c;
        }
        return x._index <=> y._index;
      }
    }
    return std::strong_ordering::equal;
  }

  bool operator==(VertexName const& x, VertexName const& y) {
    return x._tag == y._tag && x._stage == y._stage && x._index == y._index
           && x._label == y._label && x._parents == y._parents;
  }

  std::size_t VertexNameHash::operator()(VertexName const& v) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(
        (static_cast<std::uint64_t>(v.tag()) << 56) ^ v.stage_rank());
    auto mix = [&h](std::size_t x) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(std::hash<std::uint64_t>{}(v.index()));
    mix(std::hash<std::string>{}(v.label()));
    for (auto const& p : v.parents()) {
      mix(operator()(p));
    }
    return h;
  }

  void normalise(std::vector<VertexName>& names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
  }

  std::vector<VertexName> parse_name_list(std::string_view text) {
    std::vector<VertexName> out;
    if (text.find_first_not_of(' ') == std::string_view::npos) {
      return out;
    }
    std::size_t depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      char c = i < text.size() ? text[i] : ',';
      if (c == '(') {
        ++depth;
      } else if (c == ')') {
        if (depth == 0) {
          throw ParseError("unbalanced ')' in name list");
        }
        --depth;
      } else if (c == ',' && depth == 0) {
        std::string_view item = text.substr(start, i - start);
        while (!item.empty() && item.front() == ' ') {
          item.remove_prefix(1);
        }
        while (!item.empty() && item.back() == ' ') {
          item.remove_suffix(1);
        }
        if (item.empty()) {
          throw ParseError("empty entry in name list \"" + std::string(text)
                           + "\"");
        }
        out.push_back(VertexName::parse(item));
        start = i + 1;
      }
    }
    if (depth != 0) {
      throw ParseError("unbalanced '(' in name list");
    }
    return out;
  }

}  // namespace forge
