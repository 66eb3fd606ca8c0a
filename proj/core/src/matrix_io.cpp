#include "posop/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "posop/errors.hpp"

namespace posop {

namespace {

using nlohmann::json;

double read_exponent(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ParseError("unrecognized exponent \"" + s + "\"");
  }
  if (!v.is_number()) throw ParseError("\"p\" must be a number or \"inf\"");
  return v.get<double>();
}

double read_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseError(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

std::vector<double> read_array(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw ParseError(std::string(what) + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

SpaceSemantics read_space(const json& s, std::size_t dim) {
  if (!s.is_object()) throw ParseError("\"space\" must be an object");
  const std::string kind = s.value("kind", std::string("seq"));
  const double p = s.contains("p") ? read_exponent(s.at("p")) : 2.0;
  const double a = read_number(s, "a", 0.0);
  const double b = read_number(s, "b", 1.0);
  std::vector<double> coords;
  if (s.contains("coordinates")) coords = read_array(s.at("coordinates"), "coordinates");

  if (kind == "lp") {
    if (s.contains("weights")) {
      const auto w = read_array(s.at("weights"), "weights");
      if (w.size() != dim) throw DimensionMismatch("weights length does not match dim");
      return SpaceSemantics::lp_grid(
          Eigen::Map<const RealVector>(w.data(), static_cast<Eigen::Index>(w.size())), p,
          std::move(coords));
    }
    if (!coords.empty()) {
      throw ParseError("lp coordinates need explicit weights");
    }
    return SpaceSemantics::lp_midpoint(dim, a, b, p);
  }
  if (kind == "ck") {
    if (!coords.empty()) return SpaceSemantics::ck_grid(std::move(coords));
    if (dim == 1) return SpaceSemantics::ck_grid({a});
    return SpaceSemantics::ck_uniform(dim, a, b);
  }
  if (kind == "seq") return SpaceSemantics::sequence(dim, p);
  throw ParseError("unknown space kind \"" + kind + "\"");
}

}  // namespace

Operator operator_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("operator document must be a JSON object");
  if (!doc.contains("rows")) throw ParseError("missing \"rows\"");
  const json& rows = doc.at("rows");
  if (!rows.is_array() || rows.empty()) throw ParseError("\"rows\" must be a non-empty array");
  const std::size_t n = rows.size();
  if (doc.contains("dim")) {
    if (!doc.at("dim").is_number_integer()) throw ParseError("\"dim\" must be an integer");
    if (doc.at("dim").get<long long>() != static_cast<long long>(n)) {
      throw DimensionMismatch("\"dim\" does not match the number of rows");
    }
  }
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = read_array(rows[i], "each row");
    if (row.size() != n) {
      throw InvalidArgument("row " + std::to_string(i) + " has " +
                            std::to_string(row.size()) + " entries, expected " +
                            std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  SpaceSemantics space = doc.contains("space") ? read_space(doc.at("space"), n)
                                               : SpaceSemantics::sequence(n, 2.0);
  return from_dense(std::move(m), std::move(space), doc.value("label", std::string()));
}

Operator operator_from_text(std::string_view text, std::string label) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string token;
    while (ls >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw ParseError("not a number: \"" + token + "\"");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix input");
  const std::size_t n = rows.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw ParseError("row " + std::to_string(i) + " has a different length");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (m.rows() != m.cols()) {
    throw InvalidArgument("matrix must be square, got " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
  return from_dense(std::move(m), SpaceSemantics::sequence(n, 2.0), std::move(label));
}

Operator parse_operator(std::string_view content, std::string label) {
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty matrix input");
  if (content[first] == '{') {
    json doc;
    try {
      doc = json::parse(content);
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    Operator t = operator_from_json(doc);
    if (t.label().empty() && !label.empty()) return t.with_matrix(t.matrix(), label);
    return t;
  }
  return operator_from_text(content, std::move(label));
}

Operator load_operator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string label = path;
  if (const auto slash = label.find_last_of('/'); slash != std::string::npos) {
    label = label.substr(slash + 1);
  }
  return parse_operator(buf.str(), label);
}

json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

json space_to_json(const SpaceSemantics& space) {
  json s;
  s["kind"] = to_string(space.kind());
  s["p"] = exponent_to_json(space.p());
  if (space.kind() == SpaceKind::LpGrid) {
    s["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
    if (!space.coordinates().empty()) s["coordinates"] = space.coordinates();
  } else if (space.kind() == SpaceKind::CKGrid) {
    s["coordinates"] = space.coordinates();
  }
  return s;
}

json operator_to_json(const Operator& t) {
  json doc;
  doc["dim"] = t.dim();
  doc["label"] = t.label();
  doc["space"] = space_to_json(t.space());
  json rows = json::array();
  for (Eigen::Index i = 0; i < t.matrix().rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(t.matrix().cols()));
    for (Eigen::Index j = 0; j < t.matrix().cols(); ++j) {
      row[static_cast<std::size_t>(j)] = t.matrix()(i, j);
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace posop
