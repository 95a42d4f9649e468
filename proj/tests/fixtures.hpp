// Small structures shared by the test suites.
#ifndef FORGE_TESTS_FIXTURES_HPP_
#define FORGE_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "forge/structure.hpp"

namespace fx {

  using forge::NamePair;
  using forge::Structure;
  using forge::VertexName;

  inline VertexName v(std::string const& s) {
    return VertexName::named(s);
  }

  inline std::vector<VertexName> letters(std::size_t n) {
    std::vector<VertexName> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(v(std::string(1, char('a' + i))));
    }
    return out;
  }

  inline Structure complete(std::size_t n) {
    auto                  vs = letters(n);
    std::vector<NamePair> es;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        es.emplace_back(vs[i], vs[j]);
      }
    }
    return Structure::graph(vs, es);
  }

  inline Structure complete_digraph(std::size_t n) {
    auto                  vs = letters(n);
    std::vector<NamePair> as;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) {
          as.emplace_back(vs[i], vs[j]);
        }
      }
    }
    return Structure::digraph(vs, as);
  }

  inline Structure edgeless(std::size_t n) {
    return Structure::graph(letters(n), {});
  }

  inline Structure path(std::size_t n) {
    auto                  vs = letters(n);
    std::vector<NamePair> es;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      es.emplace_back(vs[i], vs[i + 1]);
    }
    return Structure::graph(vs, es);
  }

  inline Structure k2() {
    return complete(2);
  }

  // K_{1,1}: a in part 0, b in part 1.
  inline Structure k11() {
    return Structure::bipartite({v("a"), v("b")}, {{v("a"), 0}, {v("b"), 1}},
                                {{v("a"), v("b")}});
  }

}  // namespace fx

#endif  // FORGE_TESTS_FIXTURES_HPP_
