#include "forge/io.hpp"

#include <fstream>  // for ifstream
#include <sstream>  // for ostringstream

#include "forge/errors.hpp"  // for ParseError, PreconditionError

namespace forge {

  namespace {
    VertexName name_from(json const& j) {
      if (!j.is_string()) {
        throw ParseError("vertex names must be JSON strings, got " + j.dump());
      }
      return VertexName::parse(j.get<std::string>());
    }
  }  // namespace

  json to_json(Structure const& s) {
    json out;
    out["kind"] = to_string(s.kind());
    json vertices = json::array();
    for (auto const& v : s.vertices()) {
      vertices.push_back(v.to_string());
    }
    out["vertices"] = std::move(vertices);
    json edges = json::array();
    for (auto const& [u, v] : s.edges()) {
      edges.push_back(json::array({u.to_string(), v.to_string()}));
    }
    out["edges"] = std::move(edges);
    if (s.kind() == Kind::bipartite) {
      json parts = json::object();
      for (std::size_t i = 0; i < s.size(); ++i) {
        parts[s.vertex(i).to_string()] = s.part(i);
      }
      out["parts"] = std::move(parts);
    }
    return out;
  }

  Structure structure_from_json(json const& j) {
    if (!j.is_object()) {
      throw ParseError("structure JSON must be an object");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) {
      throw ParseError("structure JSON needs a string \"kind\"");
    }
    if (!j.contains("vertices") || !j["vertices"].is_array()) {
      throw ParseError("structure JSON needs a \"vertices\" array");
    }
    Kind                    kind = kind_from_string(j["kind"].get<std::string>());
    std::vector<VertexName> vertices;
    for (auto const& v : j["vertices"]) {
      vertices.push_back(name_from(v));
    }
    std::vector<NamePair> edges;
    if (j.contains("edges")) {
      if (!j["edges"].is_array()) {
        throw ParseError("\"edges\" must be an array");
      }
      for (auto const& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) {
          throw ParseError("each edge must be a two-element array, got "
                           + e.dump());
        }
        edges.emplace_back(name_from(e[0]), name_from(e[1]));
      }
    }
    switch (kind) {
      case Kind::graph:
        return Structure::graph(std::move(vertices), edges);
      case Kind::digraph:
        return Structure::digraph(std::move(vertices), edges);
      case Kind::bipartite: {
        if (!j.contains("parts") || !j["parts"].is_object()) {
          throw ParseError("bipartite JSON needs a \"parts\" object");
        }
        std::map<VertexName, int> parts;
        for (auto const& [name, p] : j["parts"].items()) {
          if (!p.is_number_integer()) {
            throw ParseError("parts must be 0 or 1");
          }
          parts[VertexName::parse(name)] = p.get<int>();
        }
        return Structure::bipartite(std::move(vertices), parts, edges);
      }
    }
    return {};
  }

  json to_json(VertexMap const& m) {
    json out = json::object();
    for (auto const& [from, to] : m.assignment()) {
      out[from.to_string()] = to.to_string();
    }
    return out;
  }

  VertexMap map_from_json(json const& j) {
    if (!j.is_object()) {
      throw ParseError("a vertex map must be a JSON object");
    }
    VertexMap m;
    for (auto const& [from, to] : j.items()) {
      m.set(VertexName::parse(from), name_from(to));
    }
    return m;
  }

  json to_json(Partition const& p) {
    json out = json::array();
    for (auto const& block : p) {
      json b = json::array();
      for (auto const& v : block) {
        b.push_back(v.to_string());
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  json parse_json(std::string const& text) {
    try {
      return json::parse(text);
    } catch (json::parse_error const& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
  }

  json read_json_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw PreconditionError("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_json(buffer.str());
  }

  std::string to_dot(Structure const& s) {
    std::ostringstream out;
    bool const         directed = s.kind() == Kind::digraph;
    out << (directed ? "digraph" : "graph") << " forge {\n";
    auto quote = [](VertexName const& v) { return "\"" + v.to_string() + "\""; };
    if (s.kind() == Kind::bipartite) {
      for (int p = 0; p < 2; ++p) {
        out << "  subgraph cluster_part" << p << " {\n    label=\"part " << p
            << "\";\n";
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (s.part(i) == p) {
            out << "    " << quote(s.vertex(i)) << ";\n";
          }
        }
        out << "  }\n";
      }
    } else {
      for (auto const& v : s.vertices()) {
        out << "  " << quote(v) << ";\n";
      }
    }
    for (auto const& [u, v] : s.edges()) {
      out << "  " << quote(u) << (directed ? " -> " : " -- ") << quote(v) << ";\n";
    }
    out << "}\n";
    return out.str();
  }

}  // namespace forge
