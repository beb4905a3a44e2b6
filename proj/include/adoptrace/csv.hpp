#pragma once

// RFC-4180 style CSV: comma separated, `"` quoting with `""` escapes,
// LF or CRLF record terminators. Newlines inside quoted fields are data.

#include <cstddef>
#include <deque>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace adoptrace::csv {

struct RecordView {
    std::string_view text;      // without the terminating newline
    bool unterminated = false;  // ended inside a quoted field (only possible at EOF)
};

/// Split a parsed record into fields.
///
/// Views point either into `rec.text` or into `storage` (for fields that
/// needed unescaping). Returns false if the record is unterminated.
bool split_fields(const RecordView& rec, std::vector<std::string_view>& fields, std::deque<std::string>& storage);

/// True for a record that is empty or holds only a carriage return.
bool is_blank(const RecordView& rec) noexcept;

/// Streams a CSV file in blocks of whole records.
class BlockReader {
public:
    explicit BlockReader(const std::string& path, std::size_t block_bytes = std::size_t{32} << 20);

    /// Next batch of complete records; views stay valid until the next call.
    /// Returns false once the file is exhausted.
    bool next(std::vector<RecordView>& records);

    [[nodiscard]] std::size_t bytes_read() const noexcept { return total_read_; }

private:
    std::size_t fill();

    std::ifstream in_;
    std::size_t block_bytes_;
    std::string buf_;
    std::size_t consumed_ = 0;   // bytes of buf_ handed out by the previous call
    std::size_t scan_pos_ = 0;   // resume point for the structural scan
    std::size_t rec_start_ = 0;  // start of the pending partial record
    bool in_quotes_ = false;
    bool eof_ = false;
    std::size_t total_read_ = 0;
};

/// Quote `field` if it contains a delimiter, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Whole file as rows of fields (for small side files). Blank lines are skipped.
std::vector<std::vector<std::string>> read_all(const std::string& path);

}  // namespace adoptrace::csv
