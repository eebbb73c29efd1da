#include "cohere/runner.hpp"

#include <map>
#include <sstream>

#include "json.hpp"

#include "cohere/errors.hpp"
#include "cohere/propagation.hpp"

namespace cohere {

using nlohmann::json;

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const CapExceeded*>(&e))
        return exit_code::cap_exceeded;
    if (dynamic_cast<const IncoherentPremises*>(&e))
        return exit_code::incoherent;
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const UndeclaredAtom*>(&e)
        || dynamic_cast<const UnknownAtom*>(&e) || dynamic_cast<const ImpossibleConditioningEvent*>(&e)
        || dynamic_cast<const InvalidAssessment*>(&e) || dynamic_cast<const PreconditionFailed*>(&e)
        || dynamic_cast<const OutOfRange*>(&e) || dynamic_cast<const MissingSymbol*>(&e)
        || dynamic_cast<const DimensionMismatch*>(&e))
        return exit_code::invalid;
    return exit_code::engine_failure;
}

namespace {

json rationals(const std::vector<Rational>& values)
{
    json out = json::array();
    for (const auto& v : values)
        out.push_back(to_string(v));
    return out;
}

json one_based(const std::vector<std::size_t>& subset)
{
    json out = json::array();
    for (auto i : subset)
        out.push_back(i + 1);
    return out;
}

std::string list(const std::vector<std::size_t>& subset)
{
    std::string s;
    for (auto i : subset)
        s += (s.empty() ? "" : ", ") + std::to_string(i + 1);
    return "{" + s + "}";
}

std::string list(const std::vector<Rational>& values)
{
    std::string s;
    for (const auto& v : values)
        s += (s.empty() ? "" : ", ") + to_string(v);
    return "[" + s + "]";
}

CoherenceOptions coherence_options(const RunOptions& o)
{
    CoherenceOptions c;
    c.family_cap = o.family_cap;
    return c;
}

void append_legend(std::ostringstream& out, const Model& model)
{
    if (model.legend().empty())
        return;
    out << "legend:\n";
    for (const auto& s : model.legend())
        out << "  " << s.symbol.name() << " = P(" << s.description << ")\n";
}

json legend_json(const Model& model)
{
    json out = json::object();
    for (const auto& s : model.legend())
        out[s.symbol.name()] = "P(" + s.description + ")";
    return out;
}

void append_items(std::ostringstream& out, const Assessment& a)
{
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const auto& item = a.items()[i];
        out << "  " << i + 1 << ": P(" << item.quantity.label() << ") = " << to_string(item.value) << '\n';
        for (const auto& note : item.quantity.notes())
            out << "     note: " << note << '\n';
    }
}

Report check(Model& model, const RunOptions& o)
{
    Assessment a = model.assessment();
    CoherenceVerdict v = check_coherence(a, coherence_options(o));
    std::optional<DutchBook> book;
    if (!v.coherent)
        book = dutch_book_on(a, v.witness);

    Report r;
    r.exit_code = v.coherent ? exit_code::ok : exit_code::incoherent;
    if (o.json)
    {
        json j;
        j["verdict"] = v.coherent ? "coherent" : "incoherent";
        if (v.coherent)
        {
            if (v.solution)
                j["lambdas"] = rationals(v.solution->lambdas);
        }
        else
        {
            json w;
            w["subset"] = one_based(v.witness);
            if (book)
            {
                w["stakes"] = rationals(book->stakes);
                w["epsilon"] = to_string(book->guaranteed_gain);
            }
            j["witness"] = w;
        }
        j["legend"] = legend_json(model);
        r.text = j.dump(2) + "\n";
        return r;
    }
    std::ostringstream out;
    out << (v.coherent ? "coherent" : "incoherent") << '\n';
    out << "assessment:\n";
    append_items(out, a);
    if (!v.coherent)
    {
        out << "witness subset: " << list(v.witness) << '\n';
        if (book)
            out << "stakes: " << list(book->stakes) << "\nguaranteed gain: " << to_string(book->guaranteed_gain)
                << '\n';
    }
    append_legend(out, model);
    r.text = out.str();
    return r;
}

Report dutchbook(Model& model, const RunOptions& o)
{
    Assessment a = model.assessment();
    std::optional<DutchBook> book = find_dutch_book(a, coherence_options(o));
    Report r;
    r.exit_code = book ? exit_code::incoherent : exit_code::ok;
    if (o.json)
    {
        json j;
        if (book)
        {
            j["subset"] = one_based(book->subset);
            j["stakes"] = rationals(book->stakes);
            j["epsilon"] = to_string(book->guaranteed_gain);
        }
        else
        {
            j = "none";
        }
        r.text = j.dump(2) + "\n";
        return r;
    }
    std::ostringstream out;
    if (!book)
    {
        out << "none\n";
    }
    else
    {
        out << "dutch book\nsubset: " << list(book->subset) << "\nstakes: " << list(book->stakes)
            << "\nguaranteed gain: " << to_string(book->guaranteed_gain) << '\n';
        append_items(out, a);
    }
    r.text = out.str();
    return r;
}

Report interval_report(const ExtensionInterval& iv, const RunOptions& o, const std::string& target)
{
    Report r;
    if (o.json)
    {
        json j;
        j["target"] = target;
        j["lower"] = to_string(iv.lower);
        j["upper"] = to_string(iv.upper);
        j["exactness"] = to_string(iv.exactness);
        r.text = j.dump(2) + "\n";
        return r;
    }
    std::ostringstream out;
    out << "target: P(" << target << ")\n"
        << "lower: " << to_string(iv.lower) << '\n'
        << "upper: " << to_string(iv.upper) << '\n'
        << "exactness: " << to_string(iv.exactness) << '\n';
    if (iv.exactness == Exactness::Bisection)
        out << "resolution: 2^-" << iv.tolerance_exponent << '\n';
    r.text = out.str();
    return r;
}

ExprPtr require_target(const AssessmentDocument& doc, const RunOptions& o, std::string_view what)
{
    if (o.target)
        return o.target;
    if (doc.query && doc.query->target)
        return doc.query->target;
    throw PreconditionFailed(std::string(what) + " needs a target expression");
}

Report extend(const AssessmentDocument& doc, Model& model, const RunOptions& o)
{
    ExprPtr target = require_target(doc, o, "extend");
    Crq q = model.quantity(target);
    Assessment a = model.assessment();
    ExtensionOptions eo;
    eo.tolerance_exponent = o.tolerance_exponent;
    eo.coherence = coherence_options(o);
    return interval_report(extension_interval(a, q, eo), o, to_string(*target));
}

// Recognizes {P(A given H) = x, P(C given (A given H)) = y} with target C.
Report mp_from_document(const AssessmentDocument& doc, Model& model, const RunOptions& o)
{
    ExprPtr target = require_target(doc, o, "mp");
    Crq t = model.quantity(target);
    Assessment a = model.assessment();
    const auto fail = [] {
        throw PreconditionFailed("mp expects exactly P(A given H) = x and P(C given (A given H)) = y with target C");
    };
    if (a.size() != 2 || !a.parameters().empty())
        fail();
    const Crq& first = a.items()[0].quantity;
    const Crq& second = a.items()[1].quantity;
    const auto& reg = *model.registry();
    if (!first.conditional_view() || second.provenance() != Provenance::IteratedSimple || !t.conditional_view()
        || !truth_table(reg, t.conditional_view()->condition).all() || second.components().empty()
        || second.components().front().own_symbol() != first.own_symbol() || !second.consequent_event()
        || !equivalent(reg, *second.consequent_event(), t.conditional_view()->consequent))
        fail();
    const bool classical = truth_table(reg, first.conditional_view()->condition).all();
    return run_mp(a.items()[0].value, a.items()[1].value, classical, o);
}

std::string entry_text(const Polynomial& p, const Valuation& val, bool values, bool active)
{
    if (!values)
        return p.to_string();
    std::string s = to_string(p.evaluate(val));
    return active ? s : "[" + s + "]";
}

Report table(const AssessmentDocument& doc, Model& model, const RunOptions& o)
{
    std::vector<Crq> columns;
    std::vector<std::string> headers;
    ExprPtr target = o.target ? o.target : (doc.query ? doc.query->target : nullptr);
    std::optional<Assessment> assessment;
    if (target)
    {
        columns.push_back(model.quantity(target));
        headers.push_back(to_string(*target));
    }
    else
    {
        assessment = model.assessment();
        for (const auto& item : assessment->items())
        {
            columns.push_back(item.quantity);
            headers.push_back(item.quantity.label());
        }
    }
    if (columns.empty())
        throw PreconditionFailed("table needs a target or at least one assessed quantity");

    Valuation val;
    std::vector<TruthTable> supports;
    if (o.values)
    {
        val = (assessment ? *assessment : model.assessment()).valuation();
        for (const auto& c : columns)
            supports.push_back(support(c, val));
    }

    const auto& reg = *model.registry();
    const std::size_t worlds = constituent_count(reg);
    std::vector<std::vector<std::string>> keys;
    std::vector<TruthTable> groups;
    for (std::size_t w = worlds; w-- > 0;)
    {
        std::vector<std::string> row;
        for (std::size_t j = 0; j < columns.size(); ++j)
            row.push_back(entry_text(columns[j].payoffs()[w], val, o.values, o.values && supports[j].test(w)));
        auto it = std::find(keys.begin(), keys.end(), row);
        if (it == keys.end())
        {
            keys.push_back(row);
            groups.emplace_back(worlds);
            groups.back().set(w);
        }
        else
        {
            groups[static_cast<std::size_t>(it - keys.begin())].set(w);
        }
    }

    Report r;
    if (o.json)
    {
        json j;
        j["columns"] = headers;
        j["rows"] = json::array();
        for (std::size_t i = 0; i < keys.size(); ++i)
            j["rows"].push_back({{"constituents", describe_constituents(reg, groups[i])}, {"entries", keys[i]}});
        j["legend"] = legend_json(model);
        r.text = j.dump(2) + "\n";
        return r;
    }
    std::vector<std::string> labels;
    std::size_t width = std::string("constituents").size();
    for (const auto& g : groups)
    {
        labels.push_back(describe_constituents(reg, g));
        width = std::max(width, labels.back().size());
    }
    std::ostringstream out;
    const auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
    out << pad("constituents");
    for (const auto& h : headers)
        out << " | " << h;
    out << '\n';
    for (std::size_t i = 0; i < keys.size(); ++i)
    {
        out << pad(labels[i]);
        for (const auto& e : keys[i])
            out << " | " << e;
        out << '\n';
    }
    append_legend(out, model);
    r.text = out.str();
    return r;
}

Report failure(const std::exception& e)
{
    return Report{exit_code_for(e), std::string("error: ") + e.what() + "\n"};
}

}  // namespace

Report run(const AssessmentDocument& doc, const RunOptions& options)
{
    try
    {
        Model model(doc);
        QueryKind kind = options.kind ? *options.kind : (doc.query ? doc.query->kind : QueryKind::Check);
        switch (kind)
        {
            case QueryKind::Check: return check(model, options);
            case QueryKind::Extend: return extend(doc, model, options);
            case QueryKind::Mp: return mp_from_document(doc, model, options);
            case QueryKind::DutchBook: return dutchbook(model, options);
            case QueryKind::Table: return table(doc, model, options);
        }
        return Report{exit_code::invalid, "error: unknown query\n"};
    }
    catch (const std::exception& e)
    {
        return failure(e);
    }
}

Report run_text(std::string_view text, const RunOptions& options)
{
    try
    {
        AssessmentDocument doc = parse_document(text);
        return run(doc, options);
    }
    catch (const std::exception& e)
    {
        return failure(e);
    }
}

Report run_mp(const Rational& x, const Rational& y, bool classical, const RunOptions& options)
{
    try
    {
        ExtensionInterval closed = mp_bounds(x, y);
        ModusPonensProblem problem = modus_ponens_problem(x, y, classical);
        ExtensionOptions eo;
        eo.tolerance_exponent = options.tolerance_exponent;
        eo.coherence = coherence_options(options);
        ExtensionInterval engine = extension_interval(problem.premises, problem.target, eo);
        const bool agree = engine.lower == closed.lower && engine.upper == closed.upper;

        Report r;
        r.exit_code = agree ? exit_code::ok : exit_code::engine_failure;
        if (options.json)
        {
            json j;
            j["lower"] = to_string(closed.lower);
            j["upper"] = to_string(closed.upper);
            j["exactness"] = to_string(closed.exactness);
            j["engine"] = {{"lower", to_string(engine.lower)},
                           {"upper", to_string(engine.upper)},
                           {"exactness", to_string(engine.exactness)}};
            j["agree"] = agree;
            r.text = j.dump(2) + "\n";
            return r;
        }
        std::ostringstream out;
        out << "premises: P(A given " << (classical ? "TOP" : "H") << ") = " << to_string(x)
            << ", P(C given (A given " << (classical ? "TOP" : "H") << ")) = " << to_string(y) << '\n'
            << "lower: " << to_string(closed.lower) << '\n'
            << "upper: " << to_string(closed.upper) << '\n'
            << "engine: [" << to_string(engine.lower) << ", " << to_string(engine.upper) << "] ("
            << to_string(engine.exactness) << ")\n";
        out << (agree ? "engine agrees with the closed form\n" : "error: engine disagrees with the closed form\n");
        r.text = out.str();
        return r;
    }
    catch (const std::exception& e)
    {
        return failure(e);
    }
}

}  // namespace cohere
