#ifndef FORGE_IO_HPP_
#define FORGE_IO_HPP_

#include <string>  // for string

#include "json.hpp"  // for nlohmann::json

#include "forge/structure.hpp"  // for Structure, VertexMap

namespace forge {

  using json = nlohmann::json;

  // {"kind": ..., "vertices": [...], "edges": [[u, v], ...], "parts": {...}}
  // with vertices in VertexName order and edges as Structure::edges().
  json      to_json(Structure const& s);
  Structure structure_from_json(json const& j);

  // {"from": "to", ...}
  json      to_json(VertexMap const& m);
  VertexMap map_from_json(json const& j);

  json to_json(Partition const& p);

  // Parses text as JSON; throws ParseError on syntax errors.
  json parse_json(std::string const& text);
  json read_json_file(std::string const& path);

  // Graphviz export; bipartite parts become clusters.
  std::string to_dot(Structure const& s);

}  // namespace forge

#endif  // FORGE_IO_HPP_
