#include "hyperspec/point_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hyperspec/function_json.hpp"

namespace hyperspec {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, std::size_t column, const std::string& message)
    : InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

PointSet parse_points_csv(const std::string& text, Metric metric, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::optional<std::size_t> bad_column;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view cell(line.data() + start, (comma == std::string::npos ? line.size() : comma) - start);
            if (auto v = to_double(cell)) {
                if (!std::isfinite(*v)) throw ParseError(source, line_no, start + 1, "non-finite value");
                row.push_back(*v);
            } else if (!bad_column) {
                bad_column = start + 1;
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (bad_column) {
            if (!seen_content) {
                seen_content = true;  // header line
                continue;
            }
            throw ParseError(source, line_no, *bad_column, "expected a number");
        }
        seen_content = true;
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(source, line_no, 1,
                             "expected " + std::to_string(rows.front().size()) + " values, found " +
                                 std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(source, line_no + 1, 1, "no points");
    return PointSet(to_matrix(rows), metric);
}

PointSet parse_points_json(const std::string& text, Metric metric, const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(source, line, col, "JSON syntax error");
    }
    if (!j.is_array() || j.empty()) throw ParseError(source, 1, 1, "expected a non-empty array of points");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& p = j[i];
        if (!p.is_array()) throw ParseError(source, 1, 1, "point " + std::to_string(i) + " is not an array");
        std::vector<double> row;
        for (const auto& x : p) {
            if (!x.is_number()) throw ParseError(source, 1, 1, "point " + std::to_string(i) + " has a non-number");
            row.push_back(x.get<double>());
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(source, 1, 1, "point " + std::to_string(i) + " has the wrong dimension");
        rows.push_back(std::move(row));
    }
    return PointSet(to_matrix(rows), metric);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PointSet read_points(const std::string& path) {
    Metric metric = Metric::l1;
    const std::string meta = path + ".meta.json";
    if (std::filesystem::exists(meta)) {
        const std::string text = read_text_file(meta);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
            throw ParseError(meta, line, col, "JSON syntax error");
        }
        if (!j.is_object() || !j.contains("metric") || !j["metric"].is_string())
            throw ParseError(meta, 1, 1, "expected {\"metric\": \"l1\" | \"l2\"}");
        metric = metric_from_string(j["metric"].get<std::string>());
    }

    const std::string text = read_text_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = std::filesystem::path(path).extension() == ".json" ||
                         (first != std::string::npos && text[first] == '[');
    return is_json ? parse_points_json(text, metric, path) : parse_points_csv(text, metric, path);
}

void write_points_csv(std::ostream& out, const PointSet& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.dimension(); ++j) out << (j ? "," : "") << nlohmann::json(x.coords()(i, j)).dump();
        out << '\n';
    }
}

nlohmann::json points_to_json(const PointSet& x) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto r = x.coords().row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

}  // namespace hyperspec
