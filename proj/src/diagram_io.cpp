#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bratteli/diagram.hpp"
#include "bratteli/json_util.hpp"

namespace bratteli {

using nlohmann::ordered_json;

ordered_json bigint_to_json(const BigInt& value) {
  static const BigInt limit = BigInt(1) << 53;
  if (abs(value) <= limit) return ordered_json(value.get_si());
  return ordered_json(value.get_str());
}

BigInt bigint_from_json(const ordered_json& node) {
  if (node.is_number_integer()) return BigInt(std::to_string(node.get<long long>()), 10);
  if (node.is_number_unsigned()) return BigInt(std::to_string(node.get<unsigned long long>()), 10);
  if (node.is_string()) {
    const auto& s = node.get_ref<const std::string&>();
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos) {
      throw Error(ErrorCode::parse, "expected an integer string, got '" + s + "'");
    }
    return BigInt(s, 10);
  }
  throw Error(ErrorCode::parse, "expected an integer (number or decimal string)");
}

ordered_json intvector_to_json(const IntVector& v) {
  ordered_json out = ordered_json::array();
  for (const auto& x : v) out.push_back(bigint_to_json(x));
  return out;
}

ordered_json matrix_to_json(const IntMatrix& m) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(intvector_to_json(m.row(i)));
  return out;
}

std::string diagram_to_json(const OrderedDiagram& diagram, int indent) {
  ordered_json doc;
  doc["h1"] = intvector_to_json(diagram.h1());
  ordered_json levels = ordered_json::array();
  for (std::size_t n = 2; n <= diagram.depth(); ++n) {
    const Level& level = diagram.level(n);
    ordered_json node;
    node["matrix"] = matrix_to_json(level.matrix);
    ordered_json orders = ordered_json::array();
    for (const Word& w : level.words) orders.push_back(word_to_string(w, level.matrix.cols()));
    node["orders"] = std::move(orders);
    levels.push_back(std::move(node));
  }
  doc["levels"] = std::move(levels);
  return doc.dump(indent) + "\n";
}

OrderedDiagram diagram_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("diagram file is not valid JSON: ") + e.what());
  }
  try {
    IntVector h1;
    for (const auto& x : doc.at("h1")) h1.push_back(bigint_from_json(x));
    std::vector<Level> levels;
    std::size_t prev_rank = h1.size();
    for (const auto& node : doc.at("levels")) {
      std::vector<std::vector<BigInt>> rows;
      for (const auto& r : node.at("matrix")) {
        std::vector<BigInt> row;
        for (const auto& x : r) row.push_back(bigint_from_json(x));
        rows.push_back(std::move(row));
      }
      Level level;
      level.matrix = IntMatrix(rows);
      for (const auto& w : node.at("orders")) {
        level.words.push_back(word_from_string(w.get<std::string>(), prev_rank));
      }
      prev_rank = level.matrix.rows();
      levels.push_back(std::move(level));
    }
    return OrderedDiagram(std::move(h1), std::move(levels));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed diagram file: ") + e.what());
  }
}

OrderedDiagram load_diagram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return diagram_from_json(buffer.str());
}

void save_diagram(const OrderedDiagram& diagram, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << diagram_to_json(diagram);
}

std::string diagram_to_dot(const OrderedDiagram& diagram, std::size_t max_level) {
  std::size_t top = max_level == 0 ? diagram.depth() : std::min(max_level, diagram.depth());
  std::ostringstream out;
  out << "digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n";
  out << "  v0_1 [label=\"root\"];\n";
  for (std::size_t n = 1; n <= top; ++n) {
    out << "  { rank=same;";
    for (std::size_t k = 0; k < diagram.rank(n); ++k) out << " v" << n << "_" << (k + 1) << ";";
    out << " }\n";
  }
  for (std::size_t n = 1; n <= top; ++n) {
    for (std::size_t j = 0; j < diagram.rank(n); ++j) {
      const Word& w = diagram.word(n, j);
      for (std::size_t pos = 0; pos < w.size(); ++pos) {
        out << "  v" << (n - 1) << "_" << (w[pos] + 1) << " -> v" << n << "_" << (j + 1)
            << " [label=\"" << pos << "\"];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace bratteli
