#pragma once

#include "wcorr/error.hpp"
#include "wcorr/samples.hpp"

#include <istream>
#include <string>
#include <vector>

namespace wcorr::cli {

// Malformed input file or column selection.
class SchemaError : public Error {
public:
    using Error::Error;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Comma-separated records with a header row. Double-quoted fields may
/// contain commas, newlines and doubled quotes; blank lines are skipped.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

struct ColumnSplit {
    std::vector<std::string> first;
    std::vector<std::string> second;
};

/// Parses "x1=a[,b...];x2=c[,d...]".
ColumnSplit parse_split(const std::string& spec);
std::vector<std::string> split_list(const std::string& list);

/// Selects and parses the named columns; every value must be a finite number.
SampleSet select_samples(const CsvTable& table, const ColumnSplit& split);

}  // namespace wcorr::cli
