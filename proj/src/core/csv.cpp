#include "core/csv.hpp"

#include "core/error.hpp"

namespace betscan {

CsvReader::CsvReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) raise(ErrorKind::Io, "cannot open file: " + path);
    if (!read_record(header_)) raise(ErrorKind::Parse, path + ": missing header row");
}

int CsvReader::column(std::string_view name) const {
    for (size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return static_cast<int>(i);
    }
    return -1;
}

bool CsvReader::next(std::vector<std::string>& fields) { return read_record(fields); }

bool CsvReader::read_record(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    // Skip blank lines between records.
    while (c == '\n' || c == '\r') {
        if (c == '\n') ++current_line_;
        c = in_.get();
    }
    if (c == EOF) return false;

    record_line_ = current_line_ + 1;
    std::string field;
    bool quoted = false;
    while (true) {
        if (c == EOF) {
            ++current_line_;
            break;
        }
        if (quoted) {
            if (c == '"') {
                int peek = in_.peek();
                if (peek == '"') {
                    in_.get();
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++current_line_;
                field += static_cast<char>(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && in_.peek() == '\n') in_.get();
            ++current_line_;
            break;
        } else {
            field += static_cast<char>(c);
        }
        c = in_.get();
    }
    fields.push_back(std::move(field));
    return true;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) raise(ErrorKind::Io, "cannot open file for writing: " + path);
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(fields[i]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    out_.flush();
    if (!out_) raise(ErrorKind::Io, "write failed: " + path_);
    out_.close();
}

std::string csv_escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace betscan
