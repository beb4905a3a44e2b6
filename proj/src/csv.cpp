#include "adoptrace/csv.hpp"

#include "adoptrace/error.hpp"
#include "adoptrace/simd/scan.hpp"

namespace adoptrace::csv {

bool is_blank(const RecordView& rec) noexcept {
    return rec.text.empty() || (rec.text.size() == 1 && rec.text[0] == '\r');
}

bool split_fields(const RecordView& rec, std::vector<std::string_view>& fields, std::deque<std::string>& storage) {
    fields.clear();
    storage.clear();
    if (rec.unterminated) return false;

    std::string_view s = rec.text;
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);

    const auto& k = simd::active();
    std::size_t i = 0;
    while (true) {
        if (i < s.size() && s[i] == '"') {
            std::string& f = storage.emplace_back();
            ++i;
            bool plain = true;  // no escapes so far: field is a direct view
            const std::size_t body = i;
            while (true) {
                const std::size_t q = k.find_any(s, i, simd::ByteSet('"'));
                if (q == simd::npos) return false;
                f.append(s.substr(i, q - i));
                if (q + 1 < s.size() && s[q + 1] == '"') {
                    f.push_back('"');
                    plain = false;
                    i = q + 2;
                    continue;
                }
                i = q + 1;
                break;
            }
            // Text between the closing quote and the next comma is kept verbatim.
            const std::size_t comma = k.find_any(s, i, simd::ByteSet(','));
            const std::size_t stop = comma == simd::npos ? s.size() : comma;
            if (stop > i) {
                f.append(s.substr(i, stop - i));
                plain = false;
            }
            if (plain) {
                fields.push_back(s.substr(body, f.size()));
                storage.pop_back();
            } else {
                fields.emplace_back(f);
            }
            i = stop;
        } else {
            const std::size_t comma = k.find_any(s, i, simd::ByteSet(','));
            const std::size_t stop = comma == simd::npos ? s.size() : comma;
            fields.push_back(s.substr(i, stop - i));
            i = stop;
        }
        if (i >= s.size()) break;
        ++i;  // skip comma; a trailing comma yields a final empty field
    }
    return true;
}

BlockReader::BlockReader(const std::string& path, std::size_t block_bytes)
    : in_(path, std::ios::binary), block_bytes_(block_bytes == 0 ? 1 : block_bytes) {
    if (!in_) throw IoError("cannot open " + path);
}

std::size_t BlockReader::fill() {
    const std::size_t old = buf_.size();
    buf_.resize(old + block_bytes_);
    in_.read(buf_.data() + old, static_cast<std::streamsize>(block_bytes_));
    const auto got = static_cast<std::size_t>(in_.gcount());
    buf_.resize(old + got);
    if (in_.bad()) throw IoError("read error");
    if (got < block_bytes_) eof_ = true;
    total_read_ += got;
    return got;
}

bool BlockReader::next(std::vector<RecordView>& records) {
    records.clear();
    if (consumed_ > 0) {
        buf_.erase(0, consumed_);
        scan_pos_ -= consumed_;
        rec_start_ -= consumed_;
        consumed_ = 0;
    }
    const auto& k = simd::active();
    while (true) {
        if (!eof_) fill();
        const std::string_view view(buf_);
        std::size_t i = scan_pos_;
        while (true) {
            const std::size_t j = k.find_any(view, i, simd::ByteSet('"', '\n'));
            if (j == simd::npos) break;
            if (view[j] == '"') {
                in_quotes_ = !in_quotes_;
            } else if (!in_quotes_) {
                records.push_back({view.substr(rec_start_, j - rec_start_), false});
                rec_start_ = j + 1;
            }
            i = j + 1;
        }
        scan_pos_ = view.size();
        if (eof_) {
            if (rec_start_ < view.size()) {
                records.push_back({view.substr(rec_start_), in_quotes_});
                rec_start_ = view.size();
                scan_pos_ = rec_start_;
            }
            consumed_ = rec_start_;
            return !records.empty();
        }
        if (!records.empty()) {
            consumed_ = rec_start_;
            return true;
        }
        // A single record larger than the block: keep reading.
    }
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
        if (!first) out << ',';
        out << escape(f);
        first = false;
    }
    out << '\n';
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    bool first = true;
    for (const auto& f : fields) {
        if (!first) out << ',';
        out << escape(f);
        first = false;
    }
    out << '\n';
}

std::vector<std::vector<std::string>> read_all(const std::string& path) {
    BlockReader reader(path, std::size_t{1} << 20);
    std::vector<std::vector<std::string>> rows;
    std::vector<RecordView> records;
    std::vector<std::string_view> fields;
    std::deque<std::string> storage;
    while (reader.next(records)) {
        for (const auto& rec : records) {
            if (is_blank(rec)) continue;
            if (!split_fields(rec, fields, storage)) throw ConfigError("unterminated quoted field in " + path);
            rows.emplace_back(fields.begin(), fields.end());
        }
    }
    return rows;
}

}  // namespace adoptrace::csv
