#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "gdrc/data_io.hpp"

namespace gdrc {

namespace {

// One CSV record, honoring quoted fields (doubled quotes escape).
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    out.push_back(cell);
    return out;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

bool to_double(const std::string& cell, double& value) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

}  // namespace

Dataset parse_csv(const std::string& path, const std::string& label_column,
                  const std::string& positive_label_value) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file, header required", 0, 0);
    const auto header = split_record(line);

    std::size_t label_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
        if (trimmed(header[j]) == label_column) label_idx = j;
    if (label_idx == header.size())
        throw ConfigError("label column '" + label_column + "' not found in header");

    const std::size_t n = header.size() - 1;
    std::vector<Vector> rows;
    std::vector<int> labels;
    std::size_t dropped = 0;

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trimmed(line).empty()) continue;
        const auto cells = split_record(line);
        if (cells.size() != header.size())
            throw ParseError("wrong number of fields", lineno - 1, cells.size());

        bool missing = false;
        for (const auto& c : cells)
            if (is_missing(trimmed(c))) missing = true;
        if (missing) {
            ++dropped;
            continue;
        }

        Vector row(n);
        std::size_t f = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const std::string cell = trimmed(cells[j]);
            if (j == label_idx) continue;
            double v;
            if (!to_double(cell, v)) throw ParseError("non-numeric cell '" + cell + "'", lineno - 1, j + 1);
            row[f++] = v;
        }
        rows.push_back(std::move(row));
        labels.push_back(trimmed(cells[label_idx]) == positive_label_value ? 1 : -1);
    }

    Dataset d;
    d.name = path;
    d.dropped_rows = dropped;
    d.features = Matrix(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) d.features(i, j) = rows[i][j];
    d.labels = std::move(labels);
    d.rebuild_class_index();
    if (d.class_index[0].empty() || d.class_index[1].empty())
        throw DegenerateDataset("'" + path + "' contains a single class");
    return d;
}

}  // namespace gdrc
