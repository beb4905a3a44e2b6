#include "adoptrace/csv.hpp"
#include "adoptrace/error.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace adoptrace;
using adoptrace::test::TempDir;

namespace {

std::vector<std::string> fields_of(std::string_view text, bool* ok = nullptr) {
    std::vector<std::string_view> f;
    std::deque<std::string> storage;
    const bool good = csv::split_fields({text, false}, f, storage);
    if (ok) *ok = good;
    return {f.begin(), f.end()};
}

std::vector<std::string> collect_records(const std::string& path, std::size_t block) {
    csv::BlockReader r(path, block);
    std::vector<csv::RecordView> recs;
    std::vector<std::string> out;
    while (r.next(recs)) {
        for (auto& rec : recs) out.push_back(std::string(rec.text) + (rec.unterminated ? "<U>" : ""));
    }
    return out;
}

}  // namespace

TEST(CsvSplit, PlainQuotedAndEscaped) {
    using V = std::vector<std::string>;
    EXPECT_EQ(fields_of("a,b,c"), (V{"a", "b", "c"}));
    EXPECT_EQ(fields_of("a,,c,"), (V{"a", "", "c", ""}));
    EXPECT_EQ(fields_of(R"("x,y","say ""hi""",z)"), (V{"x,y", R"(say "hi")", "z"}));
    EXPECT_EQ(fields_of("\"multi\nline\",2\r"), (V{"multi\nline", "2"}));
    EXPECT_EQ(fields_of(""), (V{""}));
    // Lenient: text after a closing quote is kept.
    EXPECT_EQ(fields_of(R"("ab"cd,e)"), (V{"abcd", "e"}));
    bool ok = true;
    fields_of(R"(a,"open)", &ok);
    EXPECT_FALSE(ok);
}

TEST(CsvBlockReader, RecordsIndependentOfBlockSize) {
    TempDir dir;
    std::mt19937_64 rng(99);
    std::ostringstream content;
    content << "url,headers\n";
    for (int i = 0; i < 300; ++i) {
        std::string h = "Server: x\nX-Powered-By: PHP/5.6." + std::to_string(i);
        if (i % 7 == 0) h += "\n\"quoted\"";
        csv::write_row(content, {"http://d" + std::to_string(rng() % 50) + ".example/", h});
        if (i % 50 == 0) content << "\r\n";
    }
    content << "tail,no-newline";
    const auto path = dir.write("a.csv", content.str()).string();

    const auto reference = collect_records(path, 1 << 20);
    ASSERT_EQ(reference.back(), "tail,no-newline");
    for (std::size_t block : {1u, 2u, 7u, 64u, 1000u}) {
        EXPECT_EQ(collect_records(path, block), reference) << "block " << block;
    }
}

TEST(CsvBlockReader, UnterminatedFinalRecordFlagged) {
    TempDir dir;
    const auto path = dir.write("b.csv", "a,b\n1,\"open\n2,3\n").string();
    const auto recs = collect_records(path, 4);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[1], "1,\"open\n2,3\n<U>");
}

TEST(CsvBlockReader, MissingFileIsIoError) {
    EXPECT_THROW(csv::BlockReader("/nonexistent/dir/x.csv"), IoError);
}

TEST(CsvWrite, EscapedRowsReadBack) {
    TempDir dir;
    std::mt19937_64 rng(5);
    const std::string alphabet = "ab,\"\n\r x";
    std::vector<std::vector<std::string>> rows;
    std::ostringstream out;
    for (int i = 0; i < 200; ++i) {
        std::vector<std::string> row;
        for (int c = 0; c < 3; ++c) {
            std::string f;
            for (std::size_t n = rng() % 8; n > 0; --n) f.push_back(alphabet[rng() % alphabet.size()]);
            row.push_back("k" + f);  // leading letter keeps rows from being blank
        }
        csv::write_row(out, row);
        rows.push_back(row);
    }
    const auto path = dir.write("c.csv", out.str());
    EXPECT_EQ(csv::read_all(path.string()), rows);
}
