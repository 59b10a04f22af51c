#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace epimob {

/// Strict reader for the plain comma-delimited schemas used by the toolkit:
/// UTF-8, mandatory header row, no quoting or embedded commas.
class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path);

    const std::vector<std::string>& header() const { return header_; }

    /// Index of a required header column; throws naming the file otherwise.
    size_t col(const std::string& name) const;

    /// Reads the next data row into `fields`. Returns false at EOF.
    /// Rows with a field count different from the header are rejected.
    bool next(std::vector<std::string>& fields);

    /// 1-based line number of the row most recently returned by next().
    size_t line() const { return line_; }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream in_;
    std::vector<std::string> header_;
    size_t line_ = 0;
};

/// Writer emitting one row per call; numeric formatting goes through
/// fmt_num so reruns are byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path,
              const std::vector<std::string>& header);

    void row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    size_t n_cols_;
    std::string path_;
};

/// Shortest-ish stable decimal rendering ("%.12g").
std::string fmt_num(double v);

std::vector<std::string> split_csv_line(const std::string& line);

} // namespace epimob
