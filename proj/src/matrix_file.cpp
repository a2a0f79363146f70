#include "isoposet/matrix_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "isoposet/errors.hpp"

namespace isoposet {

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ":" + std::to_string(line_of(text, e.byte)) +
                     ": invalid JSON (" + e.what() + ")");
  }
}

[[noreturn]] void fail(const std::string& source, const std::string& field, const std::string& msg) {
  throw ParseError(source + ": field '" + field + "': " + msg);
}

double number_at(const Json& j, const std::string& source, const std::string& field) {
  if (!j.is_number()) fail(source, field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(source, field, "non-finite value");
  return v;
}

Eigen::MatrixXd real_block(const Json& j, std::size_t dim, const std::string& source,
                           const std::string& field) {
  if (!j.is_array()) fail(source, field, "expected an array of rows");
  if (j.size() != dim) {
    fail(source, field, "expected " + std::to_string(dim) + " rows, found " + std::to_string(j.size()));
  }
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd out(d, d);
  for (std::size_t i = 0; i < dim; ++i) {
    const Json& row = j[i];
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(source, rf, "expected an array");
    if (row.size() != dim) {
      fail(source, rf, "ragged row: expected " + std::to_string(dim) + " entries, found " +
                           std::to_string(row.size()));
    }
    for (std::size_t k = 0; k < dim; ++k) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          number_at(row[k], source, rf + "[" + std::to_string(k) + "]");
    }
  }
  return out;
}

Json real_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json real_list(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const Json& j, std::size_t dim, const std::string& source) {
  const auto d = static_cast<Eigen::Index>(dim);
  Vector v(d);
  if (j.is_object()) {
    if (!j.contains("re")) fail(source, "re", "missing");
    const Json& re = j["re"];
    const Json im = j.contains("im") ? j["im"] : Json::array();
    if (!re.is_array() || re.size() != dim) fail(source, "re", "expected " + std::to_string(dim) + " numbers");
    if (!im.is_array() || (!im.empty() && im.size() != dim)) {
      fail(source, "im", "expected " + std::to_string(dim) + " numbers");
    }
    for (std::size_t i = 0; i < dim; ++i) {
      const double r = number_at(re[i], source, "re[" + std::to_string(i) + "]");
      const double m = im.empty() ? 0.0 : number_at(im[i], source, "im[" + std::to_string(i) + "]");
      v(static_cast<Eigen::Index>(i)) = Scalar(r, m);
    }
    return v;
  }
  if (!j.is_array()) fail(source, "vector", "expected an array or {re, im} object");
  if (j.size() != dim) {
    fail(source, "vector", "expected " + std::to_string(dim) + " entries, found " + std::to_string(j.size()));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string f = "[" + std::to_string(i) + "]";
    const Json& e = j[i];
    if (e.is_array()) {
      if (e.size() != 2) fail(source, f, "complex entry must be [re, im]");
      v(static_cast<Eigen::Index>(i)) =
          Scalar(number_at(e[0], source, f + "[0]"), number_at(e[1], source, f + "[1]"));
    } else {
      v(static_cast<Eigen::Index>(i)) = Scalar(number_at(e, source, f), 0.0);
    }
  }
  return v;
}

}  // namespace

std::vector<Matrix> MatrixFile::values() const {
  std::vector<Matrix> out;
  out.reserve(matrices.size());
  for (const auto& m : matrices) out.push_back(m.value);
  return out;
}

MatrixFile parse_matrix_text(const std::string& text, const std::string& source) {
  const Json root = parse_json(text, source);
  if (!root.is_object()) fail(source, "<root>", "expected an object");
  if (!root.contains("dim")) fail(source, "dim", "missing");
  const Json& dj = root["dim"];
  if (!dj.is_number_unsigned() && !(dj.is_number_integer() && dj.get<long long>() >= 0)) {
    fail(source, "dim", "expected a non-negative integer");
  }
  MatrixFile out;
  out.dim = dj.get<std::size_t>();
  if (out.dim == 0 || out.dim > kMaxDim) fail(source, "dim", "must lie in [1, 64]");
  if (!root.contains("matrices")) fail(source, "matrices", "missing");
  const Json& list = root["matrices"];
  if (!list.is_array()) fail(source, "matrices", "expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string f = "matrices[" + std::to_string(i) + "]";
    const Json& entry = list[i];
    if (!entry.is_object()) fail(source, f, "expected an object");
    NamedMatrix nm;
    if (entry.contains("name")) {
      if (!entry["name"].is_string()) fail(source, f + ".name", "expected a string");
      nm.name = entry["name"].get<std::string>();
    }
    if (!entry.contains("re")) fail(source, f + ".re", "missing");
    const Eigen::MatrixXd re = real_block(entry["re"], out.dim, source, f + ".re");
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
    if (entry.contains("im")) im = real_block(entry["im"], out.dim, source, f + ".im");
    nm.value = re.cast<Scalar>() + Scalar(0.0, 1.0) * im.cast<Scalar>();
    out.matrices.push_back(std::move(nm));
  }
  return out;
}

MatrixFile parse_matrix_file(const std::filesystem::path& path) {
  return parse_matrix_text(read_all(path), path.string());
}

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["re"] = real_rows(m.real());
  j["im"] = real_rows(m.imag());
  return j;
}

Json vector_to_json(const Vector& v) {
  Json j;
  j["re"] = real_list(v.real());
  j["im"] = real_list(v.imag());
  return j;
}

std::string write_matrix_text(const MatrixFile& file) {
  Json root;
  root["dim"] = file.dim;
  root["matrices"] = Json::array();
  for (const auto& nm : file.matrices) {
    if (static_cast<std::size_t>(nm.value.rows()) != file.dim ||
        static_cast<std::size_t>(nm.value.cols()) != file.dim) {
      throw DimensionMismatch("write_matrix_text: matrix '" + nm.name + "' is not dim x dim");
    }
    Json entry;
    entry["name"] = nm.name;
    const Json m = matrix_to_json(nm.value);
    entry["re"] = m["re"];
    entry["im"] = m["im"];
    root["matrices"].push_back(std::move(entry));
  }
  return root.dump(2) + "\n";
}

void write_matrix_file(const std::filesystem::path& path, const MatrixFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << write_matrix_text(file);
}

Vector parse_vector(const std::string& text_or_path, std::size_t dim) {
  std::string text = text_or_path;
  std::string source = "<inline vector>";
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool inline_json = first != std::string::npos && (text[first] == '[' || text[first] == '{');
  if (!inline_json) {
    source = text_or_path;
    text = read_all(text_or_path);
  }
  return vector_from_json(parse_json(text, source), dim, source);
}

}  // namespace isoposet
