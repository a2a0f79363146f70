#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "isoposet/linalg.hpp"

namespace isoposet {

using Json = nlohmann::ordered_json;

struct NamedMatrix {
  std::string name;
  Matrix value;
};

/// {"dim": d, "matrices": [{"name": ..., "re": [[...]], "im": [[...]]}, ...]}
struct MatrixFile {
  std::size_t dim = 0;
  std::vector<NamedMatrix> matrices;

  std::vector<Matrix> values() const;
};

/// Throws ParseError naming the line (for JSON syntax errors) or the field
/// path (for schema errors). `source` only labels messages.
MatrixFile parse_matrix_text(const std::string& text, const std::string& source = "<input>");
MatrixFile parse_matrix_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation of every entry.
std::string write_matrix_text(const MatrixFile& file);
void write_matrix_file(const std::filesystem::path& path, const MatrixFile& file);

/// {"re": [[...]], "im": [[...]]}
Json matrix_to_json(const Matrix& m);
/// {"re": [...], "im": [...]}
Json vector_to_json(const Vector& v);

/// A vector given inline as JSON or as a path to a file holding such JSON.
/// Accepted forms: [1, 2], [[re, im], ...], {"re": [...], "im": [...]}.
Vector parse_vector(const std::string& text_or_path, std::size_t dim);

}  // namespace isoposet
