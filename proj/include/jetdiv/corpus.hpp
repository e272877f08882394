#ifndef JETDIV_CORPUS_HPP
#define JETDIV_CORPUS_HPP

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include <jetdiv/error.hpp>
#include <jetdiv/oracle.hpp>

namespace jetdiv
{

// Malformed corpus line; line() is 1-based.
class CorpusError : public Error
{
public:
    CorpusError(const std::string &message, std::size_t line)
        : Error("corpus line " + std::to_string(line) + ": " + message), line_(line)
    {
    }

    std::size_t line() const noexcept
    {
        return line_;
    }

    const char *kind() const noexcept override
    {
        return "corpus error";
    }

private:
    std::size_t line_;
};

/// One case per line as a JSON object with keys expr, x0, order and the
/// optional expected (array of order+1 numbers) and rel_tol. Blank lines are
/// skipped. Case ids are line numbers.
inline CorpusCase parse_corpus_line(const std::string &line, std::size_t line_no)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
        throw CorpusError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object()) {
        throw CorpusError("expected a JSON object", line_no);
    }
    for (const auto &[key, value] : j.items()) {
        if (key != "expr" && key != "x0" && key != "order" && key != "expected" && key != "rel_tol") {
            throw CorpusError("unknown key '" + key + "'", line_no);
        }
    }
    CorpusCase c;
    c.id = line_no;
    if (!j.contains("expr") || !j["expr"].is_string()) {
        throw CorpusError("'expr' must be a string", line_no);
    }
    c.expr_text = j["expr"].get<std::string>();
    if (!j.contains("x0") || !j["x0"].is_number()) {
        throw CorpusError("'x0' must be a number", line_no);
    }
    c.x0 = j["x0"].get<double>();
    if (!j.contains("order") || !j["order"].is_number_integer() || j["order"].get<long long>() < 0) {
        throw CorpusError("'order' must be a non-negative integer", line_no);
    }
    c.order = j["order"].get<int>();
    if (j.contains("expected")) {
        const auto &arr = j["expected"];
        if (!arr.is_array() || arr.size() != static_cast<std::size_t>(c.order) + 1) {
            throw CorpusError("'expected' must be an array of order+1 numbers", line_no);
        }
        std::vector<double> values;
        for (const auto &v : arr) {
            if (!v.is_number()) {
                throw CorpusError("'expected' must contain numbers only", line_no);
            }
            values.push_back(v.get<double>());
        }
        c.expected = std::move(values);
    }
    if (j.contains("rel_tol")) {
        if (!j["rel_tol"].is_number() || !(j["rel_tol"].get<double>() > 0.0)) {
            throw CorpusError("'rel_tol' must be a positive number", line_no);
        }
        c.rel_tol = j["rel_tol"].get<double>();
    }
    return c;
}

inline std::vector<CorpusCase> load_corpus(std::istream &in)
{
    std::vector<CorpusCase> cases;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        cases.push_back(parse_corpus_line(line, line_no));
    }
    return cases;
}

} // namespace jetdiv

#endif
