#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "gdrc/data_io.hpp"

namespace gdrc {

namespace {

int map_label(const std::string& tok, std::size_t lineno) {
    if (tok == "+1" || tok == "1" || tok == "1.0" || tok == "+1.0") return 1;
    if (tok == "-1" || tok == "-1.0" || tok == "0" || tok == "2") return -1;
    throw LabelError("unknown label '" + tok + "' at line " + std::to_string(lineno));
}

}  // namespace

Dataset parse_svmlight(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");

    struct SparseRow {
        int label;
        std::vector<std::pair<std::size_t, double>> entries;
    };
    std::vector<SparseRow> rows;
    std::size_t max_index = 0;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;

        SparseRow row;
        row.label = map_label(tok, lineno);
        std::size_t prev = 0;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw ParseError("expected idx:val, got '" + tok + "'", lineno, 0);
            std::size_t idx = 0;
            double val = 0.0;
            try {
                idx = std::stoul(tok.substr(0, colon));
                val = std::stod(tok.substr(colon + 1));
            } catch (const std::exception&) {
                throw ParseError("bad idx:val token '" + tok + "'", lineno, 0);
            }
            if (idx == 0 || idx <= prev)
                throw ParseError("indices must be 1-based and ascending", lineno, idx);
            prev = idx;
            max_index = std::max(max_index, idx);
            row.entries.emplace_back(idx, val);
        }
        rows.push_back(std::move(row));
    }

    Dataset d;
    d.name = path;
    d.features = Matrix(rows.size(), max_index);
    d.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [idx, val] : rows[i].entries) d.features(i, idx - 1) = val;
        d.labels.push_back(rows[i].label);
    }
    d.rebuild_class_index();
    return d;
}

void write_svmlight(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    char buf[40];
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << (d.labels[i] > 0 ? "+1" : "-1");
        for (std::size_t j = 0; j < d.dim(); ++j) {
            // Zeros are written too: the dense shape survives a round trip.
            std::snprintf(buf, sizeof buf, "%.17g", d.features(i, j));
            out << ' ' << (j + 1) << ':' << buf;
        }
        out << '\n';
    }
}

}  // namespace gdrc
