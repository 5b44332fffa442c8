#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace betscan {

// Minimal RFC-4180-style CSV reader: headered files, quoted fields with ""
// escapes, LF or CRLF line endings. Tracks the physical line a record
// started on so loaders can attach line numbers to diagnostics.
class CsvReader {
public:
    // Raises Error{Io} when the file cannot be opened, Error{Parse} when the
    // header row is missing.
    explicit CsvReader(const std::string& path);

    const std::vector<std::string>& header() const { return header_; }

    // Index of a header column, or -1.
    int column(std::string_view name) const;

    // Reads the next record into `fields`. Returns false at end of file.
    bool next(std::vector<std::string>& fields);

    // Physical 1-based line number on which the last record returned by
    // next() started (the header is line 1).
    size_t line_number() const { return record_line_; }

    const std::string& path() const { return path_; }

private:
    bool read_record(std::vector<std::string>& fields);

    std::string path_;
    std::ifstream in_;
    std::vector<std::string> header_;
    size_t current_line_ = 0;
    size_t record_line_ = 0;
};

class CsvWriter {
public:
    // Raises Error{Io} when the file cannot be created.
    explicit CsvWriter(const std::string& path);

    void write_row(const std::vector<std::string>& fields);

    // Flushes and verifies stream state; raises Error{Io} on failure.
    void close();

private:
    std::string path_;
    std::ofstream out_;
};

// Quotes a single field if it contains separators, quotes, or newlines.
std::string csv_escape(std::string_view field);

}  // namespace betscan
