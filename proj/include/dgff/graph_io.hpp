#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dgff/graph.hpp"

namespace dgff {

enum class GraphFormat { Json, EdgeList };

/// Parses a graph in either input format and validates it.
///
/// Edge list: one `u v c` triple per line, `#` starts a comment, and
/// `!exterior a b ...` lines declare exterior vertices. Vertices are indexed
/// in order of first appearance in edge lines.
///
/// JSON: `{"vertices":[...], "exterior":[...], "edges":[{"u":..,"v":..,"c":..}]}`
/// with vertices indexed in listed order.
Graph parse_graph(std::istream& in, GraphFormat format);
Graph parse_graph(std::string_view text, GraphFormat format);

/// `.json` files are read as JSON, anything else as an edge list.
GraphFormat format_for_path(const std::filesystem::path& path);
Graph load_graph(const std::filesystem::path& path);

/// Whole-file read; throws IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace dgff
