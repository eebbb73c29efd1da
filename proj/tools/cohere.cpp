#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cohere/errors.hpp"
#include "cohere/runner.hpp"

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw cohere::PreconditionFailed("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Accepts "2^-K" or plain "K".
unsigned parse_tolerance(const std::string& text)
{
    std::string digits = text.rfind("2^-", 0) == 0 ? text.substr(3) : text;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 3)
        throw cohere::PreconditionFailed("--tol expects 2^-K, got '" + text + "'");
    unsigned k = static_cast<unsigned>(std::stoul(digits));
    if (k == 0 || k > 200)
        throw cohere::PreconditionFailed("--tol exponent must be in 1..200");
    return k;
}

std::size_t subset_cap_from_env()
{
    const char* v = std::getenv("COHERE_SUBSET_CAP");
    if (!v || !*v)
        return 12;
    std::string s(v);
    if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6)
        throw cohere::PreconditionFailed("COHERE_SUBSET_CAP must be a positive integer");
    auto cap = static_cast<std::size_t>(std::stoul(s));
    if (cap == 0)
        throw cohere::PreconditionFailed("COHERE_SUBSET_CAP must be a positive integer");
    return cap;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coherence checking and propagation for conditional previsions"};
    app.require_subcommand(1);

    std::string file, target, tol, x_text, y_text;
    bool json = false, classical = false, values = false;

    auto* check = app.add_subcommand("check", "Check coherence of the assessments in FILE");
    check->add_option("FILE", file, "assessment file")->required();
    check->add_flag("--json", json, "machine-readable output");

    auto* extend = app.add_subcommand("extend", "Interval of coherent previsions for a target");
    extend->add_option("FILE", file, "assessment file")->required();
    extend->add_option("--target", target, "conditional expression, e.g. 'C' or 'A given H'");
    extend->add_option("--tol", tol, "bisection resolution 2^-K (default 2^-20)");
    extend->add_flag("--json", json, "machine-readable output");

    auto* mp = app.add_subcommand("mp", "Generalized modus ponens bounds, cross-checked by the engine");
    mp->add_option("--x", x_text, "P(A given H)")->required();
    mp->add_option("--y", y_text, "P(C given (A given H))")->required();
    mp->add_flag("--classical", classical, "use H = TOP");
    mp->add_option("--tol", tol, "bisection resolution 2^-K (default 2^-20)");
    mp->add_flag("--json", json, "machine-readable output");

    auto* book = app.add_subcommand("dutchbook", "Search for a Dutch book");
    book->add_option("FILE", file, "assessment file")->required();
    book->add_flag("--json", json, "machine-readable output");

    auto* table = app.add_subcommand("table", "Payoff table over the constituents");
    table->add_option("FILE", file, "assessment file")->required();
    table->add_option("--target", target, "conditional expression");
    table->add_flag("--values", values, "substitute assessed values; off-support entries in brackets");
    table->add_flag("--json", json, "machine-readable output");

    auto* run = app.add_subcommand("run", "Run the query stated in FILE");
    run->add_option("FILE", file, "assessment file")->required();
    run->add_option("--tol", tol, "bisection resolution 2^-K (default 2^-20)");
    run->add_flag("--json", json, "machine-readable output");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : cohere::exit_code::invalid;
    }

    cohere::Report report;
    try
    {
        cohere::RunOptions options;
        options.json = json;
        options.values = values;
        options.family_cap = subset_cap_from_env();
        if (!tol.empty())
            options.tolerance_exponent = parse_tolerance(tol);
        if (!target.empty())
            options.target = cohere::parse_expression(target);

        if (mp->parsed())
        {
            report = cohere::run_mp(cohere::parse_rational(x_text), cohere::parse_rational(y_text), classical,
                                    options);
        }
        else
        {
            if (check->parsed())
                options.kind = cohere::QueryKind::Check;
            else if (extend->parsed())
                options.kind = cohere::QueryKind::Extend;
            else if (book->parsed())
                options.kind = cohere::QueryKind::DutchBook;
            else if (table->parsed())
                options.kind = cohere::QueryKind::Table;
            report = cohere::run_text(slurp(file), options);
        }
    }
    catch (const std::invalid_argument& e)
    {
        report = {cohere::exit_code::invalid, std::string("error: ") + e.what() + "\n"};
    }
    catch (const std::exception& e)
    {
        report = {cohere::exit_code_for(e), std::string("error: ") + e.what() + "\n"};
    }

    (report.exit_code == cohere::exit_code::ok || report.exit_code == cohere::exit_code::incoherent ? std::cout
                                                                                                      : std::cerr)
        << report.text;
    return report.exit_code;
}
