#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <jetdiv/corpus.hpp>

namespace jetdiv
{
namespace
{

std::size_t error_line(const std::string &text)
{
    std::istringstream in(text);
    try {
        load_corpus(in);
    } catch (const CorpusError &e) {
        return e.line();
    }
    return 0;
}

TEST(Corpus, parses_cases)
{
    std::istringstream in(R"j({"expr": "x^2", "x0": 1.5, "order": 2, "expected": [2.25, 3, 2]}

{"expr": "sin(x)", "x0": 0, "order": 3, "rel_tol": 1e-6}
)j");
    const auto cases = load_corpus(in);
    ASSERT_EQ(cases.size(), 2U);
    EXPECT_EQ(cases[0].expr_text, "x^2");
    EXPECT_EQ(cases[0].x0, 1.5);
    EXPECT_EQ(cases[0].order, 2);
    EXPECT_EQ(cases[0].expected, (std::vector<double>{2.25, 3, 2}));
    EXPECT_EQ(cases[0].rel_tol, 1e-9);
    EXPECT_EQ(cases[0].id, 1U);
    EXPECT_FALSE(cases[1].expected);
    EXPECT_EQ(cases[1].rel_tol, 1e-6);
    EXPECT_EQ(cases[1].id, 3U);
}

TEST(Corpus, empty_input)
{
    std::istringstream in("\n  \n");
    EXPECT_TRUE(load_corpus(in).empty());
}

TEST(Corpus, rejects_malformed_lines)
{
    EXPECT_EQ(error_line("{\"expr\": \"x\", \"x0\": 0, \"order\": 1}\nnot json\n"), 2U);
    EXPECT_EQ(error_line("[1, 2]"), 1U);
    EXPECT_EQ(error_line(R"({"x0": 0, "order": 1})"), 1U);
    EXPECT_EQ(error_line(R"({"expr": "x", "order": 1})"), 1U);
    EXPECT_EQ(error_line(R"({"expr": "x", "x0": "0", "order": 1})"), 1U);
    EXPECT_EQ(error_line(R"({"expr": "x", "x0": 0, "order": -1})"), 1U);
    EXPECT_EQ(error_line(R"({"expr": "x", "x0": 0, "order": 1.5})"), 1U);
    EXPECT_EQ(error_line(R"({"expr": "x", "x0": 0, "order": 1, "expected": [0]})"), 1U);
    EXPECT_EQ(error_line(R"({"expr": "x", "x0": 0, "order": 1, "expected": [0, "1"]})"), 1U);
    EXPECT_EQ(error_line(R"({"expr": "x", "x0": 0, "order": 1, "rel_tol": 0})"), 1U);
    EXPECT_EQ(error_line(R"({"expr": "x", "x0": 0, "order": 1, "extra": 1})"), 1U);
}

TEST(Corpus, shipped_file)
{
    std::ifstream in(JETDIV_CORPUS);
    ASSERT_TRUE(in);
    const auto cases = load_corpus(in);
    EXPECT_GE(cases.size(), 20U);
    bool has_tan = false;
    for (const auto &c : cases) {
        EXPECT_LE(c.order, 12);
        has_tan = has_tan || c.expr_text == "sin(x)/cos(x)";
    }
    EXPECT_TRUE(has_tan);
}

} // namespace
} // namespace jetdiv
