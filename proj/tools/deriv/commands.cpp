#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include <jetdiv/jetdiv.hpp>

namespace deriv
{
namespace
{

using Clock = std::chrono::steady_clock;

// Keeps benchmarked results observable.
volatile double bench_sink = 0.0;

std::string fmt(const char *spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string g6(double v)
{
    return fmt("%.6g", v);
}

std::string g17(double v)
{
    return fmt("%.17g", v);
}

std::string json_string(const std::string &s)
{
    return nlohmann::json(s).dump();
}

std::string_view check_name(CheckMode c)
{
    switch (c) {
        case CheckMode::none:
            return "none";
        case CheckMode::sym:
            return "sym";
        case CheckMode::fd:
            return "fd";
        case CheckMode::all:
            return "all";
    }
    return "none";
}

std::string_view summation_name(jetdiv::Summation s)
{
    return s == jetdiv::Summation::compensated ? "compensated" : "naive";
}

// Source line with a caret under the byte offset.
void print_caret(std::ostream &err, const std::string &text, std::size_t pos)
{
    err << "  " << text << "\n  " << std::string(std::min(pos, text.size()), ' ') << "^\n";
}

void report_error(std::ostream &err, const jetdiv::Error &e, const std::string &expr_text)
{
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    if (e.position()) {
        print_caret(err, expr_text, *e.position());
    }
}

int exit_code_for(const jetdiv::Error &e)
{
    if (dynamic_cast<const jetdiv::SyntaxError *>(&e) != nullptr) {
        return exit_parse;
    }
    if (dynamic_cast<const jetdiv::CorpusError *>(&e) != nullptr) {
        return exit_parse;
    }
    return exit_numeric;
}

} // namespace

bool DerivativeReport::check_passed() const
{
    return std::all_of(rows.begin(), rows.end(),
                       [](const ReportRow &r) { return (!r.sym || r.sym->pass) && (!r.fd || r.fd->pass); });
}

DerivativeReport build_report(const EvalArgs &args)
{
    if (args.order < 0) {
        throw std::invalid_argument("order must be non-negative");
    }
    if (!std::isfinite(args.x0)) {
        throw jetdiv::NonFiniteError("expansion point must be finite");
    }
    DerivativeReport report;
    report.expr_text = args.expr;
    report.x0 = args.x0;
    report.order = args.order;
    report.method = args.method;
    report.summation = args.summation;
    report.check = args.check;

    const auto start = Clock::now();
    const jetdiv::Expr e = jetdiv::parse(args.expr);
    jetdiv::EvalOptions opts;
    opts.method = args.method;
    opts.summation = args.summation;
    opts.notes = &report.quotients;
    const jetdiv::Jet jet = jetdiv::eval_jet(e, args.x0, static_cast<std::size_t>(args.order), opts);
    const auto values = jetdiv::derivatives(jet);
    report.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();

    for (int k = 0; k <= args.order; ++k) {
        report.rows.push_back({k, values[static_cast<std::size_t>(k)], jet[static_cast<std::size_t>(k)], {}, {}});
    }

    const bool want_sym = args.check == CheckMode::sym || args.check == CheckMode::all;
    const bool want_fd = args.check == CheckMode::fd || args.check == CheckMode::all;
    if (want_sym) {
        jetdiv::DerivativeTower tower(e);
        const int kmax = std::min(args.order, jetdiv::symbolic_max_order);
        const auto oracle = tower.values(kmax, args.x0);
        for (int k = 0; k <= kmax; ++k) {
            auto &row = report.rows[static_cast<std::size_t>(k)];
            const auto v = jetdiv::compare_order(k, row.derivative, oracle[static_cast<std::size_t>(k)], 1e-9);
            row.sym = CheckDelta{v.oracle, v.abs_dev, v.rel_dev, v.pass};
        }
    }
    if (want_fd) {
        const int kmax = std::min(args.order, jetdiv::fd_max_order);
        for (int k = 1; k <= kmax; ++k) {
            auto &row = report.rows[static_cast<std::size_t>(k)];
            const double fd = jetdiv::finite_difference(e, k, args.x0);
            const double dev = std::abs(row.derivative - fd);
            const double rel = fd != 0.0 ? dev / std::abs(fd) : (dev == 0.0 ? 0.0 : HUGE_VAL);
            row.fd = CheckDelta{fd, dev, rel, jetdiv::fd_agrees(row.derivative, fd)};
        }
    }
    return report;
}

std::string render_text(const DerivativeReport &r)
{
    std::ostringstream os;
    os << "expression  " << r.expr_text << '\n';
    os << "x0          " << g6(r.x0) << '\n';
    os << "order       " << r.order << '\n';
    os << "method      " << jetdiv::method_name(r.method) << '\n';
    os << "summation   " << summation_name(r.summation) << '\n';
    os << '\n';
    const bool checked = r.check != CheckMode::none;
    char line[256];
    std::snprintf(line, sizeof line, "%4s  %14s  %14s", "k", "derivative", "scaled");
    os << line;
    if (checked) {
        std::snprintf(line, sizeof line, "  %-17s  %-17s", "sym rel.dev", "fd abs.dev");
        os << line;
    }
    os << '\n';
    const auto cell = [](const std::optional<CheckDelta> &d, bool relative) {
        if (!d) {
            return std::string("-");
        }
        return fmt("%.2e", relative ? d->rel_dev : d->abs_dev) + (d->pass ? " ok" : " FAIL");
    };
    for (const auto &row : r.rows) {
        std::snprintf(line, sizeof line, "%4d  %14s  %14s", row.k, g6(row.derivative).c_str(), g6(row.scaled).c_str());
        os << line;
        if (checked) {
            std::snprintf(line, sizeof line, "  %-17s  %-17s", cell(row.sym, true).c_str(), cell(row.fd, false).c_str());
            os << line;
        }
        os << '\n';
    }
    if (checked) {
        os << '\n' << "check       " << check_name(r.check) << ": " << (r.check_passed() ? "passed" : "FAILED") << '\n';
    }
    os << "wall time   " << fmt("%.3g", r.wall_time_s) << " s\n";
    return os.str();
}

std::string render_json(const DerivativeReport &r)
{
    const auto delta = [](const std::optional<CheckDelta> &d) -> std::string {
        if (!d) {
            return "null";
        }
        return "{\"oracle\": " + g17(d->oracle) + ", \"abs_dev\": " + g17(d->abs_dev)
               + ", \"rel_dev\": " + (std::isfinite(d->rel_dev) ? g17(d->rel_dev) : std::string("null"))
               + ", \"pass\": " + (d->pass ? "true" : "false") + "}";
    };
    const bool checked = r.check != CheckMode::none;
    std::ostringstream os;
    os << "{\n";
    os << "  \"expr\": " << json_string(r.expr_text) << ",\n";
    os << "  \"x0\": " << g17(r.x0) << ",\n";
    os << "  \"order\": " << r.order << ",\n";
    os << "  \"method\": \"" << jetdiv::method_name(r.method) << "\",\n";
    os << "  \"summation\": \"" << summation_name(r.summation) << "\",\n";
    os << "  \"check\": \"" << check_name(r.check) << "\",\n";
    os << "  \"rows\": [";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto &row = r.rows[i];
        os << (i == 0 ? "\n" : ",\n");
        os << "    {\"k\": " << row.k << ", \"derivative\": " << g17(row.derivative) << ", \"scaled\": " << g17(row.scaled);
        if (checked) {
            os << ", \"sym\": " << delta(row.sym) << ", \"fd\": " << delta(row.fd);
        }
        os << '}';
    }
    os << "\n  ],\n";
    if (checked) {
        os << "  \"check_passed\": " << (r.check_passed() ? "true" : "false") << ",\n";
    }
    os << "  \"wall_time_s\": " << g17(r.wall_time_s) << "\n";
    os << "}\n";
    return os.str();
}

int cmd_eval(const EvalArgs &args, std::ostream &out, std::ostream &err)
{
    DerivativeReport report;
    try {
        report = build_report(args);
    } catch (const jetdiv::Error &e) {
        report_error(err, e, args.expr);
        return exit_code_for(e);
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    for (const auto &q : report.quotients) {
        if (std::abs(q.denominator) < jetdiv::conditioning_threshold) {
            err << "warning: quotient denominator " << g6(q.denominator) << " is below "
                << g6(jetdiv::conditioning_threshold) << "; derivatives may be ill-conditioned";
            if (q.position) {
                err << " (at position " << *q.position << ")";
            }
            err << '\n';
        }
    }
    out << (args.json ? render_json(report) : render_text(report));
    if (report.check != CheckMode::none && !report.check_passed()) {
        return exit_check;
    }
    return exit_ok;
}

int cmd_check(const CheckArgs &args, std::ostream &out, std::ostream &err)
{
    std::ifstream in(args.corpus_path);
    if (!in) {
        err << "error: cannot read corpus file '" << args.corpus_path << "'\n";
        return exit_usage;
    }
    std::vector<jetdiv::CorpusCase> cases;
    try {
        cases = jetdiv::load_corpus(in);
    } catch (const jetdiv::CorpusError &e) {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    }
    if (args.max_order) {
        for (auto &c : cases) {
            c = c.truncated(*args.max_order);
        }
    }

    std::vector<jetdiv::OracleVerdict> verdicts(cases.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            verdicts[i] = jetdiv::run_case(cases[i], args.method, args.summation);
        }
    };
    const unsigned jobs = std::max(1U, std::min<unsigned>(args.jobs, static_cast<unsigned>(cases.size())));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    std::size_t passed = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto &c = cases[i];
        const auto &v = verdicts[i];
        const std::string label = "line " + std::to_string(c.id) + "  " + c.expr_text + " at " + g6(c.x0) + ", order "
                                  + std::to_string(c.order);
        if (v.passed) {
            ++passed;
            out << "PASS  " << label << ", worst rel " << fmt("%.2e", v.worst_rel) << '\n';
            continue;
        }
        out << "FAIL  " << label;
        if (v.error) {
            out << ": " << *v.error << '\n';
            continue;
        }
        int shown = 0;
        for (const auto &o : v.orders) {
            if (o.pass) {
                continue;
            }
            if (shown++ == 3) {
                out << " ...";
                break;
            }
            out << (shown == 1 ? ": " : "; ") << "k=" << o.k << " computed " << g17(o.computed) << " oracle "
                << g17(o.oracle) << " (rel " << fmt("%.2e", o.rel_dev) << ")";
        }
        out << '\n';
    }
    out << cases.size() << " cases: " << passed << " passed, " << cases.size() - passed << " failed\n";
    return passed == cases.size() ? exit_ok : exit_check;
}

BenchRow bench_quotient(jetdiv::QuotientMethod method, std::size_t order, int reps)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<double> u(order + 1);
    std::vector<double> v(order + 1);
    for (std::size_t k = 0; k <= order; ++k) {
        u[k] = coeff(rng);
        v[k] = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 1000)));
    }
    const jetdiv::Jet num(0.0, u);
    const jetdiv::Jet den(0.0, v);

    double sink = 0.0;
    const auto time_calls = [&](std::size_t calls) {
        const auto t0 = Clock::now();
        for (std::size_t i = 0; i < calls; ++i) {
            sink += jetdiv::quotient(num, den, method).coeffs().back();
        }
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };

    std::size_t calls = 1;
    while (time_calls(calls) < 1e-3 && calls < (std::size_t{1} << 24)) {
        calls *= 2;
    }
    std::vector<double> per_call;
    for (int r = 0; r < std::max(reps, 1); ++r) {
        per_call.push_back(time_calls(calls) / static_cast<double>(calls));
    }
    std::sort(per_call.begin(), per_call.end());
    bench_sink = sink;
    return {method, order, per_call[per_call.size() / 2], calls};
}

int cmd_bench(const BenchArgs &args, std::ostream &out, std::ostream &err)
{
    std::vector<BenchRow> rows;
    std::vector<std::pair<jetdiv::QuotientMethod, std::size_t>> skipped;
    try {
        for (const auto method : args.methods) {
            for (const auto order : args.orders) {
                if (method == jetdiv::QuotientMethod::cramer && order > jetdiv::cramer_max_order) {
                    skipped.emplace_back(method, order);
                    continue;
                }
                rows.push_back(bench_quotient(method, order, args.reps));
            }
        }
    } catch (const jetdiv::Error &e) {
        err << "error: " << e.kind() << ": " << e.what() << '\n';
        return exit_code_for(e);
    }

    if (args.json) {
        out << "{\n  \"reps\": " << args.reps << ",\n  \"cramer_max_order\": " << jetdiv::cramer_max_order
            << ",\n  \"results\": [";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto &r = rows[i];
            out << (i == 0 ? "\n" : ",\n") << "    {\"method\": \"" << jetdiv::method_name(r.method)
                << "\", \"order\": " << r.order << ", \"median_seconds\": " << g17(r.median_seconds)
                << ", \"iterations\": " << r.iterations << '}';
        }
        out << "\n  ],\n  \"skipped\": [";
        for (std::size_t i = 0; i < skipped.size(); ++i) {
            out << (i == 0 ? "\n" : ",\n") << "    {\"method\": \"" << jetdiv::method_name(skipped[i].first)
                << "\", \"order\": " << skipped[i].second << '}';
        }
        out << "\n  ]\n}\n";
        return exit_ok;
    }

    char line[128];
    std::snprintf(line, sizeof line, "%-11s %7s %14s %11s\n", "method", "order", "median (s)", "iterations");
    out << line;
    for (const auto &r : rows) {
        std::snprintf(line, sizeof line, "%-11s %7zu %14.4g %11zu\n", std::string(jetdiv::method_name(r.method)).c_str(),
                      r.order, r.median_seconds, r.iterations);
        out << line;
    }
    for (const auto &[method, order] : skipped) {
        out << jetdiv::method_name(method) << " skipped at order " << order << " (limit "
            << jetdiv::cramer_max_order << ")\n";
    }
    return exit_ok;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Higher-order derivatives of one-variable expressions via truncated Taylor arithmetic", "deriv"};
    app.require_subcommand(1);

    const std::map<std::string, jetdiv::QuotientMethod> methods{
        {"recursion", jetdiv::QuotientMethod::recursion},
        {"cramer", jetdiv::QuotientMethod::cramer},
        {"reciprocal", jetdiv::QuotientMethod::reciprocal},
    };
    const std::map<std::string, CheckMode> checks{
        {"sym", CheckMode::sym},
        {"fd", CheckMode::fd},
        {"all", CheckMode::all},
    };

    EvalArgs eval;
    bool eval_compensated = false;
    auto *eval_cmd = app.add_subcommand("eval", "Derivatives of one expression at a point");
    eval_cmd->add_option("--expr,-e", eval.expr, "Expression in x")->required();
    eval_cmd->add_option("--at,-a", eval.x0, "Expansion point")->required();
    eval_cmd->add_option("--order,-n", eval.order, "Highest derivative order")->required()->check(CLI::NonNegativeNumber);
    eval_cmd->add_option("--method,-m", eval.method, "Quotient method")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    eval_cmd->add_option("--check", eval.check, "Compare against oracles: sym, fd or all")
        ->transform(CLI::CheckedTransformer(checks, CLI::ignore_case));
    eval_cmd->add_flag("--compensated", eval_compensated, "Use compensated summation");
    eval_cmd->add_flag("--json", eval.json, "Emit JSON");

    CheckArgs check;
    bool check_compensated = false;
    int max_order = -1;
    auto *check_cmd = app.add_subcommand("check", "Verify a corpus file");
    check_cmd->add_option("--corpus,-c", check.corpus_path, "Corpus file (JSON Lines)")->required();
    check_cmd->add_option("--method,-m", check.method, "Quotient method")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    check_cmd->add_option("--max-order", max_order, "Truncate every case to this order")
        ->check(CLI::NonNegativeNumber);
    check_cmd->add_option("--jobs,-j", check.jobs, "Worker threads")->check(CLI::PositiveNumber);
    check_cmd->add_flag("--compensated", check_compensated, "Use compensated summation");

    BenchArgs bench;
    std::vector<std::string> bench_methods;
    auto *bench_cmd = app.add_subcommand("bench", "Time the recursion against Cramer's rule");
    bench_cmd->add_option("--orders", bench.orders, "Orders to time")->delimiter(',');
    bench_cmd->add_option("--methods", bench_methods, "Methods to time")
        ->delimiter(',')
        ->check(CLI::IsMember({"recursion", "cramer", "reciprocal"}));
    bench_cmd->add_option("--reps", bench.reps, "Repetitions per measurement")->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--json", bench.json, "Emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (*eval_cmd) {
        eval.summation = eval_compensated ? jetdiv::Summation::compensated : jetdiv::Summation::naive;
        return cmd_eval(eval, out, err);
    }
    if (*check_cmd) {
        check.summation = check_compensated ? jetdiv::Summation::compensated : jetdiv::Summation::naive;
        if (max_order >= 0) {
            check.max_order = max_order;
        }
        return cmd_check(check, out, err);
    }
    if (!bench_methods.empty()) {
        bench.methods.clear();
        for (const auto &m : bench_methods) {
            bench.methods.push_back(methods.at(m));
        }
    }
    return cmd_bench(bench, out, err);
}

} // namespace deriv
