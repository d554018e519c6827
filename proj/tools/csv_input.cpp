#include "csv_input.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace wcorr::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool blank(const std::vector<std::string>& record) {
    return std::all_of(record.begin(), record.end(), [](const std::string& f) { return f.empty(); });
}

double parse_number(const std::string& text, const std::string& column, std::size_t row) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || errno == ERANGE || !std::isfinite(value)) {
        throw SchemaError("column '" + column + "', data row " + std::to_string(row) +
                          ": '" + text + "' is not a finite number");
    }
    return value;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    char c = 0;
    auto end_field = [&] {
        record.push_back(field_was_quoted ? field : trim(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        if (!blank(record)) records.push_back(std::move(record));
        record.clear();
    };
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            if (!trim(field).empty()) throw SchemaError("quote inside an unquoted field");
            field.clear();
            quoted = true;
            field_was_quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_record();
        } else if (c != '\r') {
            if (field_was_quoted && c != ' ' && c != '\t') {
                throw SchemaError("text after a closing quote");
            }
            if (!field_was_quoted) field += c;
        }
    }
    if (quoted) throw SchemaError("unterminated quoted field");
    if (!field.empty() || !record.empty() || field_was_quoted) end_record();

    if (records.empty()) throw SchemaError("input has no header row");
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw SchemaError("data row " + std::to_string(r) + " has " +
                              std::to_string(records[r].size()) + " fields, header has " +
                              std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    if (path == "-") return read_csv(std::cin);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    return read_csv(in);
}

std::vector<std::string> split_list(const std::string& list) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const auto piece = trim(list.substr(start, comma == std::string::npos ? std::string::npos
                                                                               : comma - start));
        if (piece.empty()) throw SchemaError("empty column name in '" + list + "'");
        out.push_back(piece);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

ColumnSplit parse_split(const std::string& spec) {
    ColumnSplit split;
    std::size_t start = 0;
    while (start < spec.size()) {
        const auto semi = spec.find(';', start);
        const auto part = trim(spec.substr(start, semi == std::string::npos ? std::string::npos
                                                                             : semi - start));
        start = semi == std::string::npos ? spec.size() : semi + 1;
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw SchemaError("split part '" + part + "' lacks '='");
        const auto key = trim(part.substr(0, eq));
        auto columns = split_list(part.substr(eq + 1));
        if (key == "x1") {
            split.first = std::move(columns);
        } else if (key == "x2") {
            split.second = std::move(columns);
        } else {
            throw SchemaError("split key must be x1 or x2, got '" + key + "'");
        }
    }
    if (split.first.empty() || split.second.empty()) {
        throw SchemaError("split must name columns for both x1 and x2");
    }
    return split;
}

SampleSet select_samples(const CsvTable& table, const ColumnSplit& split) {
    auto index_of = [&](const std::string& name) {
        const auto it = std::find(table.header.begin(), table.header.end(), name);
        if (it == table.header.end()) throw SchemaError("no column named '" + name + "'");
        return static_cast<std::size_t>(it - table.header.begin());
    };
    if (table.rows.empty()) throw SchemaError("input has no data rows");
    auto gather = [&](const std::vector<std::string>& names) {
        std::vector<std::size_t> idx;
        for (const auto& name : names) idx.push_back(index_of(name));
        std::vector<double> coords;
        coords.reserve(table.rows.size() * idx.size());
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            for (std::size_t k = 0; k < idx.size(); ++k) {
                coords.push_back(parse_number(table.rows[r][idx[k]], names[k], r + 1));
            }
        }
        return coords;
    };
    return SampleSet(split.first.size(), split.second.size(), gather(split.first),
                     gather(split.second));
}

}  // namespace wcorr::cli
