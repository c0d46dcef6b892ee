#include "locreg/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace locreg {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
    if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

std::size_t CsvFile::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == name) return c;
    raise(ErrorCode::IoError, "CSV is missing column '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

CsvFile read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());

    CsvFile file;
    std::string line;
    if (!std::getline(in, line))
        raise(ErrorCode::IoError, path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    file.header = split_line(line);
    file.columns.resize(file.header.size());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != file.header.size())
            raise(ErrorCode::IoError, path.string() + ":" + std::to_string(line_no) +
                                          ": expected " +
                                          std::to_string(file.header.size()) +
                                          " fields, got " +
                                          std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            char* end = nullptr;
            const double v = std::strtod(fields[c].c_str(), &end);
            if (end == fields[c].c_str())
                raise(ErrorCode::IoError, path.string() + ":" + std::to_string(line_no) +
                                              ": cannot parse '" + fields[c] + "'");
            file.columns[c].push_back(v);
        }
    }
    return file;
}

Dataset read_dataset_csv(const std::filesystem::path& path, bool require_response) {
    const CsvFile file = read_csv(path);
    std::size_t dim = 0;
    while (true) {
        const std::string name = "x" + std::to_string(dim + 1);
        bool found = false;
        for (const auto& h : file.header)
            if (h == name) found = true;
        if (!found) break;
        ++dim;
    }
    if (dim == 0)
        raise(ErrorCode::IoError, path.string() + " has no predictor columns x1..xD");

    Dataset data;
    data.x = PointSet(file.rows(), dim);
    for (std::size_t a = 0; a < dim; ++a)
        data.x.cols[a] = file.columns[file.column("x" + std::to_string(a + 1))];

    bool has_y = false;
    for (const auto& h : file.header)
        if (h == "y") has_y = true;
    if (has_y)
        data.y = file.columns[file.column("y")];
    else if (require_response)
        raise(ErrorCode::IoError, path.string() + " has no response column y");
    else
        data.y.assign(file.rows(), 0.0);
    data.validate();
    return data;
}

}  // namespace locreg
