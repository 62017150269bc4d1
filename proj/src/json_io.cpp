#include "bsde/json_io.hpp"

#include <fstream>
#include <sstream>

namespace bsde {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Schema, "field \"" + field + "\": " + what);
}

const json& require_field(const json& j, const std::string& field) {
  if (!j.is_object()) schema_error(field, "enclosing value is not an object");
  auto it = j.find(field);
  if (it == j.end()) schema_error(field, "missing");
  return *it;
}

std::size_t require_count(const json& j, const std::string& field) {
  const json& v = require_field(j, field);
  if (!v.is_number_integer() || v.get<long long>() < 1) schema_error(field, "must be a positive integer");
  return v.get<std::size_t>();
}

json real_rows(const ComplexMatrix& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd read_rows(const json& j, const std::string& field, std::size_t rows, std::size_t cols) {
  const json& v = require_field(j, field);
  if (!v.is_array() || v.size() != rows) {
    std::ostringstream os;
    os << "expected " << rows << " rows";
    schema_error(field, os.str());
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || row.size() != cols) {
      std::ostringstream os;
      os << "row " << i << " must have " << cols << " entries";
      schema_error(field, os.str());
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number()) schema_error(field, "entries must be numbers");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k].get<double>();
    }
  }
  return out;
}

}  // namespace

json point_to_json(const DomainPoint& pt) {
  const ComplexMatrix& m = pt.matrix();
  return json{{"kind", to_string(pt.kind())},
              {"p", m.rows()},
              {"q", m.cols()},
              {"re", real_rows(m, false)},
              {"im", real_rows(m, true)}};
}

DomainPoint point_from_json(const json& j) {
  const json& kind = require_field(j, "kind");
  if (!kind.is_string()) schema_error("kind", "must be a string");
  const std::string k = kind.get<std::string>();
  const std::size_t p = require_count(j, "p");
  std::size_t q = p;
  if (k == "I") {
    q = require_count(j, "q");
  } else if (k == "III" || k == "Siegel") {
    if (j.contains("q") && (!j["q"].is_number_integer() || j["q"].get<long long>() != static_cast<long long>(p)))
      schema_error("q", "must equal p for square kinds");
  } else {
    schema_error("kind", "must be one of \"I\", \"III\", \"Siegel\"");
  }
  ComplexMatrix z(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
  z.real() = read_rows(j, "re", p, q);
  z.imag() = read_rows(j, "im", p, q);
  if (k == "I") return DomainPoint::type_i(std::move(z));
  if (k == "III") return DomainPoint::type_iii(std::move(z));
  return DomainPoint::siegel(std::move(z));
}

json ball_to_json(const BallPoint& z) {
  return point_to_json(z.as_domain_point());
}

BallPoint ball_from_json(const json& j) {
  const DomainPoint pt = point_from_json(j);
  if (pt.kind() != DomainKind::TypeI || pt.shape().q != 1)
    schema_error("kind", "a ball point must be a kind \"I\" point with a single column");
  const ComplexMatrix& m = pt.matrix();
  return BallPoint(m.cols() == 1 ? ComplexVector(m.col(0)) : ComplexVector(m.row(0).transpose()));
}

json spec_to_json(const EmbeddingSpec& spec) {
  json factors = json::array();
  for (const auto& f : spec.factors) factors.push_back({{"kind", to_string(f.kind)}, {"m", f.m}});
  return json{{"source_dim", spec.source_dim}, {"target_g", spec.target_g}, {"factors", factors}};
}

EmbeddingSpec spec_from_json(const json& j) {
  EmbeddingSpec spec;
  spec.source_dim = require_count(j, "source_dim");
  spec.target_g = require_count(j, "target_g");
  const json& factors = require_field(j, "factors");
  if (!factors.is_array() || factors.empty()) schema_error("factors", "must be a nonempty array");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::string where = "factors[" + std::to_string(i) + "]";
    const json& f = factors[i];
    if (!f.is_object()) schema_error(where, "must be an object");
    const json& kind = require_field(f, "kind");
    auto parsed = kind.is_string() ? parse_factor_kind(kind.get<std::string>()) : std::nullopt;
    if (!parsed) schema_error(where + ".kind", "unknown factor kind");
    FactorSpec fs{*parsed, 1};
    if (f.contains("m")) {
      if (!f["m"].is_number_integer() || f["m"].get<long long>() < 1)
        schema_error(where + ".m", "must be a positive integer");
      fs.m = f["m"].get<std::size_t>();
    }
    spec.factors.push_back(fs);
  }
  return spec;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, path + ": malformed JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Schema, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace bsde
