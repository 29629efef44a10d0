#pragma once

// Point sets on disk: CSV (one point per row, optional header line) or a
// JSON array of arrays. The metric tag lives in an optional sidecar
// "<path>.meta.json" holding {"metric": "l1" | "l2"}; default l1.

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hyperspec/errors.hpp"
#include "hyperspec/l1_embeddings.hpp"

namespace hyperspec {

class ParseError : public InputError {
public:
    ParseError(std::string source, std::size_t line, std::size_t column, const std::string& message);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// `source` only labels error messages.
PointSet parse_points_csv(const std::string& text, Metric metric = Metric::l1, const std::string& source = "<csv>");
PointSet parse_points_json(const std::string& text, Metric metric = Metric::l1,
                           const std::string& source = "<json>");

/// JSON when the extension is .json or the first non-blank character is '[',
/// CSV otherwise. Reads the sidecar tag when present.
PointSet read_points(const std::string& path);

void write_points_csv(std::ostream& out, const PointSet& x);
nlohmann::json points_to_json(const PointSet& x);

std::string read_text_file(const std::string& path);

}  // namespace hyperspec
