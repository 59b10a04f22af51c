#include "epimob/csv.hpp"

#include <cstdio>

#include "epimob/error.hpp"

namespace epimob {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

CsvReader::CsvReader(const std::filesystem::path& path) : path_(path.string()), in_(path) {
    if (!in_) {
        throw input_error("cannot open CSV file '" + path_ + "'");
    }
    std::string line;
    if (!std::getline(in_, line)) {
        throw input_error("CSV file '" + path_ + "' is empty (header row mandatory)");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    header_ = split_csv_line(line);
    line_ = 1;
}

size_t CsvReader::col(const std::string& name) const {
    for (size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    throw input_error("'" + path_ + "': missing required column '" + name + "'");
}

bool CsvReader::next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fields = split_csv_line(line);
        if (fields.size() != header_.size()) {
            throw input_error("'" + path_ + "' row " + std::to_string(line_) +
                              ": expected " + std::to_string(header_.size()) +
                              " fields, got " + std::to_string(fields.size()));
        }
        return true;
    }
    return false;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : out_(path), n_cols_(header.size()), path_(path.string()) {
    if (!out_) {
        throw input_error("cannot open '" + path_ + "' for writing");
    }
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != n_cols_) {
        throw computation_error("'" + path_ + "': row width mismatch");
    }
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace epimob
