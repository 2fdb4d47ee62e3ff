#include "dgff/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "dgff/error.hpp"

namespace dgff {

namespace {

double parse_conductance(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                           ": bad conductance '" + token + "'");
  }
  return value;
}

Graph parse_edge_list(std::istream& in) {
  std::vector<std::string> vertices;
  std::unordered_set<std::string> known;
  std::vector<std::string> exterior;
  std::vector<EdgeSpec> edges;

  auto note = [&](const std::string& id) {
    if (known.insert(id).second) vertices.push_back(id);
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::vector<std::string> fields;
    for (std::string t; tokens >> t;) fields.push_back(std::move(t));
    if (fields.empty()) continue;

    if (fields.front() == "!exterior") {
      exterior.insert(exterior.end(), fields.begin() + 1, fields.end());
      continue;
    }
    if (fields.front().starts_with('!')) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                             ": unknown directive '" +
                                             fields.front() + "'");
    }
    if (fields.size() != 3) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected 'u v c'");
    }
    note(fields[0]);
    note(fields[1]);
    edges.push_back(
        EdgeSpec{fields[0], fields[1], parse_conductance(fields[2], line_no)});
  }
  for (const auto& id : exterior) note(id);
  return Graph::build(std::move(vertices), exterior, edges);
}

Graph parse_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  try {
    auto vertices = doc.at("vertices").get<std::vector<std::string>>();
    std::vector<std::string> exterior;
    if (doc.contains("exterior")) {
      exterior = doc.at("exterior").get<std::vector<std::string>>();
    }
    std::vector<EdgeSpec> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back(EdgeSpec{e.at("u").get<std::string>(),
                               e.at("v").get<std::string>(),
                               e.at("c").get<double>()});
    }
    return Graph::build(std::move(vertices), exterior, edges);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("malformed graph JSON: ") + e.what());
  }
}

}  // namespace

Graph parse_graph(std::istream& in, GraphFormat format) {
  return format == GraphFormat::Json ? parse_json(in) : parse_edge_list(in);
}

Graph parse_graph(std::string_view text, GraphFormat format) {
  std::istringstream in{std::string(text)};
  return parse_graph(in, format);
}

GraphFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? GraphFormat::Json
                                     : GraphFormat::EdgeList;
}

Graph load_graph(const std::filesystem::path& path) {
  return parse_graph(read_file(path), format_for_path(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace dgff
