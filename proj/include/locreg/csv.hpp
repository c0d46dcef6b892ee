#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "locreg/point_set.hpp"

namespace locreg {

/// 17 significant digits: enough for a lossless double round-trip.
std::string format_double(double value);

/// Header + pre-formatted rows; write() emits LF line endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(const std::filesystem::path& path) const;
};

struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // one vector per header entry

    std::size_t rows() const { return header.empty() ? 0 : columns[0].size(); }
    /// Index of a named column; raises IoError when absent.
    std::size_t column(const std::string& name) const;
};

CsvFile read_csv(const std::filesystem::path& path);

/// Reads predictor columns x1..xD (D inferred) and, when present, y.
Dataset read_dataset_csv(const std::filesystem::path& path, bool require_response);

}  // namespace locreg
