#ifndef DERIV_COMMANDS_HPP
#define DERIV_COMMANDS_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <jetdiv/eval.hpp>
#include <jetdiv/jet.hpp>

namespace deriv
{

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_parse = 2,
    exit_numeric = 3,
    exit_check = 4,
};

enum class CheckMode { none, sym, fd, all };

struct EvalArgs {
    std::string expr;
    double x0 = 0.0;
    int order = 0;
    jetdiv::QuotientMethod method = jetdiv::QuotientMethod::recursion;
    jetdiv::Summation summation = jetdiv::Summation::naive;
    CheckMode check = CheckMode::none;
    bool json = false;
};

struct CheckDelta {
    double oracle;
    double abs_dev;
    double rel_dev;
    bool pass;
};

struct ReportRow {
    int k;
    double derivative;
    double scaled;
    std::optional<CheckDelta> sym;
    std::optional<CheckDelta> fd;
};

struct DerivativeReport {
    std::string expr_text;
    double x0 = 0.0;
    int order = 0;
    jetdiv::QuotientMethod method = jetdiv::QuotientMethod::recursion;
    jetdiv::Summation summation = jetdiv::Summation::naive;
    CheckMode check = CheckMode::none;
    std::vector<ReportRow> rows;
    std::vector<jetdiv::QuotientNote> quotients;
    double wall_time_s = 0.0;

    bool check_passed() const;
};

// Evaluates and, when requested, checks against the oracles. Throws the
// library's errors unchanged.
DerivativeReport build_report(const EvalArgs &args);

// Human table (6 significant digits). The final "wall time" line is the only
// part that varies between identical runs.
std::string render_text(const DerivativeReport &report);

// JSON document (17 significant digits); keys are listed in docs/cli.md.
std::string render_json(const DerivativeReport &report);

int cmd_eval(const EvalArgs &args, std::ostream &out, std::ostream &err);

struct CheckArgs {
    std::string corpus_path;
    jetdiv::QuotientMethod method = jetdiv::QuotientMethod::recursion;
    jetdiv::Summation summation = jetdiv::Summation::naive;
    std::optional<int> max_order;
    unsigned jobs = 1;
};

int cmd_check(const CheckArgs &args, std::ostream &out, std::ostream &err);

struct BenchRow {
    jetdiv::QuotientMethod method;
    std::size_t order;
    double median_seconds;
    std::size_t iterations;
};

// Median time of one order-n quotient over reps repetitions. Each repetition
// loops enough calls to last at least about a millisecond.
BenchRow bench_quotient(jetdiv::QuotientMethod method, std::size_t order, int reps);

struct BenchArgs {
    std::vector<std::size_t> orders{12, 256, 512, 1024, 2048, 4096};
    std::vector<jetdiv::QuotientMethod> methods{jetdiv::QuotientMethod::recursion, jetdiv::QuotientMethod::cramer};
    int reps = 7;
    bool json = false;
};

int cmd_bench(const BenchArgs &args, std::ostream &out, std::ostream &err);

// Full command line: deriv eval | check | bench.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace deriv

#endif
