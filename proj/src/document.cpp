#include "cohere/document.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <boost/dynamic_bitset.hpp>

#include "cohere/errors.hpp"

namespace cohere {

ExprPtr Expr::top() { return std::make_shared<const Expr>(Expr{Kind::Top, {}, nullptr, nullptr}); }
ExprPtr Expr::bottom() { return std::make_shared<const Expr>(Expr{Kind::Bottom, {}, nullptr, nullptr}); }
ExprPtr Expr::named(std::string name)
{
    return std::make_shared<const Expr>(Expr{Kind::Name, std::move(name), nullptr, nullptr});
}
ExprPtr Expr::negation(ExprPtr operand)
{
    return std::make_shared<const Expr>(Expr{Kind::Not, {}, std::move(operand), nullptr});
}
ExprPtr Expr::conjunction(ExprPtr a, ExprPtr b)
{
    return std::make_shared<const Expr>(Expr{Kind::And, {}, std::move(a), std::move(b)});
}
ExprPtr Expr::disjunction(ExprPtr a, ExprPtr b)
{
    return std::make_shared<const Expr>(Expr{Kind::Or, {}, std::move(a), std::move(b)});
}
ExprPtr Expr::given(ExprPtr consequent, ExprPtr condition)
{
    return std::make_shared<const Expr>(Expr{Kind::Given, {}, std::move(consequent), std::move(condition)});
}

bool equal(const Expr& a, const Expr& b)
{
    if (a.kind != b.kind || a.name != b.name)
        return false;
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) || static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs))
        return false;
    return (!a.lhs || equal(*a.lhs, *b.lhs)) && (!a.rhs || equal(*a.rhs, *b.rhs));
}

namespace {

int precedence(Expr::Kind k)
{
    switch (k)
    {
        case Expr::Kind::Given: return 0;
        case Expr::Kind::Or: return 1;
        case Expr::Kind::And: return 2;
        default: return 3;
    }
}

std::string render(const Expr& e, int context)
{
    std::string out;
    switch (e.kind)
    {
        case Expr::Kind::Top: return "TOP";
        case Expr::Kind::Bottom: return "BOT";
        case Expr::Kind::Name: return e.name;
        case Expr::Kind::Not: return "!" + render(*e.lhs, 3);
        case Expr::Kind::And: out = render(*e.lhs, 2) + " & " + render(*e.rhs, 3); break;
        case Expr::Kind::Or: out = render(*e.lhs, 1) + " | " + render(*e.rhs, 2); break;
        case Expr::Kind::Given: out = render(*e.lhs, 1) + " given " + render(*e.rhs, 1); break;
    }
    return precedence(e.kind) < context ? "(" + out + ")" : out;
}

}  // namespace

std::string to_string(const Expr& e)
{
    return render(e, 0);
}

std::string to_string(QueryKind k)
{
    switch (k)
    {
        case QueryKind::Check: return "check";
        case QueryKind::Extend: return "extend";
        case QueryKind::Mp: return "mp";
        case QueryKind::DutchBook: return "dutchbook";
        case QueryKind::Table: return "table";
    }
    return "check";
}

std::optional<QueryKind> parse_query_kind(std::string_view word)
{
    for (auto k : {QueryKind::Check, QueryKind::Extend, QueryKind::Mp, QueryKind::DutchBook, QueryKind::Table})
    {
        if (to_string(k) == word)
            return k;
    }
    return std::nullopt;
}

namespace {

bool same_expr(const ExprPtr& a, const ExprPtr& b)
{
    if (!a || !b)
        return !a && !b;
    return equal(*a, *b);
}

bool same_statements(const std::vector<Statement>& a, const std::vector<Statement>& b)
{
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const Statement& x, const Statement& y) {
        return x.value == y.value && same_expr(x.target, y.target);
    });
}

}  // namespace

bool operator==(const AssessmentDocument& a, const AssessmentDocument& b)
{
    if (a.atoms != b.atoms || !same_statements(a.statements, b.statements)
        || !same_statements(a.parameters, b.parameters))
        return false;
    if (!std::equal(a.definitions.begin(), a.definitions.end(), b.definitions.begin(), b.definitions.end(),
                    [](const Definition& x, const Definition& y) {
                        return x.name == y.name && same_expr(x.expr, y.expr);
                    }))
        return false;
    if (a.query.has_value() != b.query.has_value())
        return false;
    return !a.query || (a.query->kind == b.query->kind && same_expr(a.query->target, b.query->target));
}

namespace {

struct Token
{
    enum class Type { Ident, Number, Symbol, End };
    Type type;
    std::string text;
    std::size_t column;  // 1-based
};

class Lexer
{
    public:
        Lexer(std::string_view line, std::size_t line_no) : line_no_(line_no)
        {
            std::size_t i = 0;
            while (i < line.size())
            {
                char c = line[i];
                if (c == '#')
                    break;
                if (std::isspace(static_cast<unsigned char>(c)))
                {
                    ++i;
                    continue;
                }
                const std::size_t start = i;
                if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
                {
                    while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
                        ++i;
                    tokens_.push_back({Token::Type::Ident, std::string(line.substr(start, i - start)), start + 1});
                }
                else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.'
                         || ((c == '-' || c == '+') && i + 1 < line.size()
                             && (std::isdigit(static_cast<unsigned char>(line[i + 1])) || line[i + 1] == '.')))
                {
                    ++i;
                    while (i < line.size()
                           && (std::isdigit(static_cast<unsigned char>(line[i])) || line[i] == '.' || line[i] == '/'))
                        ++i;
                    tokens_.push_back({Token::Type::Number, std::string(line.substr(start, i - start)), start + 1});
                }
                else if (std::string_view("()!&|=").find(c) != std::string_view::npos)
                {
                    ++i;
                    tokens_.push_back({Token::Type::Symbol, std::string(1, c), start + 1});
                }
                else
                {
                    throw ParseError(line_no_, start + 1, std::string("unexpected character '") + c + "'");
                }
            }
            tokens_.push_back({Token::Type::End, "", line.size() + 1});
        }

        const Token& peek(std::size_t ahead = 0) const
        {
            return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
        }
        Token next()
        {
            Token t = peek();
            if (pos_ < tokens_.size() - 1)
                ++pos_;
            return t;
        }
        bool at_end() const { return peek().type == Token::Type::End; }

        bool accept(std::string_view symbol)
        {
            if (peek().type == Token::Type::Symbol && peek().text == symbol)
            {
                next();
                return true;
            }
            return false;
        }
        void expect(std::string_view symbol, std::string_view what)
        {
            if (!accept(symbol))
                fail("expected " + std::string(what));
        }
        [[noreturn]] void fail(const std::string& message) const
        {
            const Token& t = peek();
            std::string found = t.type == Token::Type::End ? "end of line" : "'" + t.text + "'";
            throw ParseError(line_no_, t.column, message + ", found " + found);
        }
        std::size_t line_no() const { return line_no_; }

    private:
        std::size_t line_no_;
        std::vector<Token> tokens_;
        std::size_t pos_ = 0;
};

class ExprParser
{
    public:
        // `known` = null disables identifier checking.
        ExprParser(Lexer& lex, const std::vector<std::string>* known) : lex_(lex), known_(known) {}

        ExprPtr conditional()
        {
            ExprPtr lhs = disjunction();
            if (lex_.peek().type == Token::Type::Ident && lex_.peek().text == "given")
            {
                lex_.next();
                ExprPtr rhs = disjunction();
                return Expr::given(lhs, rhs);
            }
            return lhs;
        }

    private:
        ExprPtr disjunction()
        {
            ExprPtr e = conjunction();
            while (lex_.accept("|"))
                e = Expr::disjunction(e, conjunction());
            return e;
        }

        ExprPtr conjunction()
        {
            ExprPtr e = unary();
            while (lex_.accept("&"))
                e = Expr::conjunction(e, unary());
            return e;
        }

        ExprPtr unary()
        {
            if (lex_.accept("!"))
                return Expr::negation(unary());
            return primary();
        }

        ExprPtr primary()
        {
            if (lex_.accept("("))
            {
                ExprPtr e = conditional();
                lex_.expect(")", "')'");
                return e;
            }
            const Token& t = lex_.peek();
            if (t.type != Token::Type::Ident || t.text == "given")
                lex_.fail("expected an event");
            Token id = lex_.next();
            if (id.text == "TOP")
                return Expr::top();
            if (id.text == "BOT")
                return Expr::bottom();
            if (known_ && std::find(known_->begin(), known_->end(), id.text) == known_->end())
                throw UndeclaredAtom("line " + std::to_string(lex_.line_no()) + ", column "
                                     + std::to_string(id.column) + ": undeclared identifier '" + id.text + "'");
            return Expr::named(id.text);
        }

        Lexer& lex_;
        const std::vector<std::string>* known_;
};

bool is_reserved(const std::string& word)
{
    return word == "TOP" || word == "BOT" || word == "given";
}

Rational parse_value(Lexer& lex)
{
    const Token& t = lex.peek();
    if (t.type != Token::Type::Number)
        lex.fail("expected a rational value");
    try
    {
        Rational v = parse_rational(t.text);
        lex.next();
        return v;
    }
    catch (const std::invalid_argument& e)
    {
        throw ParseError(lex.line_no(), t.column, e.what());
    }
}

// P(CEXPR), with the P( ) wrapper mandatory or optional.
ExprPtr parse_prevision_target(Lexer& lex, const std::vector<std::string>& known, bool wrapper_required)
{
    const bool wrapped = lex.peek().type == Token::Type::Ident && lex.peek().text == "P" && lex.peek(1).text == "(";
    if (!wrapped && wrapper_required)
        lex.fail("expected 'P('");
    ExprParser parser(lex, &known);
    if (!wrapped)
        return parser.conditional();
    lex.next();
    lex.next();
    ExprPtr e = parser.conditional();
    lex.expect(")", "')'");
    return e;
}

}  // namespace

AssessmentDocument parse_document(std::string_view text)
{
    AssessmentDocument doc;
    std::vector<std::string> known;  // atoms and defined names

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size())
    {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        ++line_no;
        start = end + 1;

        Lexer lex(line, line_no);
        if (lex.at_end())
            continue;
        const Token head = lex.next();
        if (head.type != Token::Type::Ident)
            throw ParseError(line_no, head.column, "expected 'atoms', 'define', 'assess', 'param' or 'query'");

        if (head.text == "atoms")
        {
            if (lex.at_end())
                lex.fail("expected at least one atom name");
            while (!lex.at_end())
            {
                const Token& t = lex.peek();
                if (t.type != Token::Type::Ident || is_reserved(t.text))
                    lex.fail("expected an atom name");
                if (std::find(known.begin(), known.end(), t.text) != known.end())
                    throw ParseError(line_no, t.column, "'" + t.text + "' is already declared");
                doc.atoms.push_back(t.text);
                known.push_back(t.text);
                lex.next();
            }
        }
        else if (head.text == "define")
        {
            const Token& t = lex.peek();
            if (t.type != Token::Type::Ident || is_reserved(t.text))
                lex.fail("expected a name");
            if (std::find(known.begin(), known.end(), t.text) != known.end())
                throw ParseError(line_no, t.column, "'" + t.text + "' is already declared");
            std::string name = lex.next().text;
            lex.expect("=", "'='");
            ExprParser parser(lex, &known);
            ExprPtr e = parser.conditional();
            if (e->kind == Expr::Kind::Given)
                throw ParseError(line_no, t.column, "definitions must be events, not conditionals");
            doc.definitions.push_back({name, e});
            known.push_back(name);
        }
        else if (head.text == "assess" || head.text == "param")
        {
            ExprPtr target = parse_prevision_target(lex, known, true);
            lex.expect("=", "'='");
            Rational v = parse_value(lex);
            (head.text == "assess" ? doc.statements : doc.parameters).push_back({target, v});
        }
        else if (head.text == "query")
        {
            if (doc.query)
                throw ParseError(line_no, head.column, "only one query per document");
            const Token& k = lex.peek();
            auto kind = k.type == Token::Type::Ident ? parse_query_kind(k.text) : std::nullopt;
            if (!kind)
                lex.fail("expected one of check, extend, mp, dutchbook, table");
            lex.next();
            ExprPtr target;
            if (!lex.at_end())
                target = parse_prevision_target(lex, known, false);
            doc.query = Query{*kind, target};
        }
        else
        {
            throw ParseError(line_no, head.column, "expected 'atoms', 'define', 'assess', 'param' or 'query'");
        }
        if (!lex.at_end())
            lex.fail("unexpected trailing input");
    }
    return doc;
}

ExprPtr parse_expression(std::string_view text)
{
    Lexer lex(text, 1);
    const bool wrapped = lex.peek().type == Token::Type::Ident && lex.peek().text == "P" && lex.peek(1).text == "(";
    ExprParser parser(lex, nullptr);
    ExprPtr e;
    if (wrapped)
    {
        lex.next();
        lex.next();
        e = parser.conditional();
        lex.expect(")", "')'");
    }
    else
    {
        e = parser.conditional();
    }
    if (!lex.at_end())
        lex.fail("unexpected trailing input");
    return e;
}

std::string serialize(const AssessmentDocument& doc)
{
    std::ostringstream out;
    if (!doc.atoms.empty())
    {
        out << "atoms";
        for (const auto& a : doc.atoms)
            out << ' ' << a;
        out << '\n';
    }
    for (const auto& d : doc.definitions)
        out << "define " << d.name << " = " << to_string(*d.expr) << '\n';
    for (const auto& s : doc.statements)
        out << "assess P(" << to_string(*s.target) << ") = " << to_string(s.value) << '\n';
    for (const auto& s : doc.parameters)
        out << "param P(" << to_string(*s.target) << ") = " << to_string(s.value) << '\n';
    if (doc.query)
    {
        out << "query " << to_string(doc.query->kind);
        if (doc.query->target)
            out << ' ' << to_string(*doc.query->target);
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------

namespace {

bool is_conditional(const Expr& e)
{
    if (e.kind == Expr::Kind::Given)
        return true;
    return (e.lhs && is_conditional(*e.lhs)) || (e.rhs && is_conditional(*e.rhs));
}

std::string bits(const TruthTable& t)
{
    std::string s;
    boost::to_string(t, s);
    return s;
}

}  // namespace

Model::Model(const AssessmentDocument& doc) : doc_(&doc)
{
    if (doc.atoms.empty())
        throw PreconditionFailed("document declares no atoms");
    registry_ = make_registry(doc.atoms);
    constituent_count(*registry_);
    for (const auto& d : doc.definitions)
        definitions_.emplace(d.name, event(d.expr));
}

Event Model::event(const ExprPtr& e) const
{
    switch (e->kind)
    {
        case Expr::Kind::Top: return Event::top();
        case Expr::Kind::Bottom: return Event::bottom();
        case Expr::Kind::Name:
        {
            if (registry_->find(e->name))
                return Event::atom(e->name);
            if (auto it = definitions_.find(e->name); it != definitions_.end())
                return it->second;
            throw UndeclaredAtom("undeclared identifier '" + e->name + "'");
        }
        case Expr::Kind::Not: return !event(e->lhs);
        case Expr::Kind::And: return event(e->lhs) & event(e->rhs);
        case Expr::Kind::Or: return event(e->lhs) | event(e->rhs);
        case Expr::Kind::Given: break;
    }
    throw PreconditionFailed("'" + to_string(*e) + "' is a conditional, not an event");
}

Symbol Model::fresh(const std::string& description)
{
    Symbol s("p" + std::to_string(legend_.size() + 1));
    legend_.push_back({s, description});
    return s;
}

Crq Model::remember(const std::string& key, Crq q)
{
    cache_.emplace(key, q);
    return q;
}

std::string Model::ce_key(const Event& a, const Event& h) const
{
    return "ce:" + bits(truth_table(*registry_, a & h)) + ":" + bits(truth_table(*registry_, h));
}

std::string Model::key_of(const Crq& q) const
{
    for (const auto& [k, v] : cache_)
    {
        if (v.own_symbol() == q.own_symbol())
            return k;
    }
    throw PreconditionFailed("quantity '" + q.label() + "' was not built by this model");
}

Crq Model::conditional(const Event& a, const Event& h, const std::string& text)
{
    if (is_impossible(*registry_, h))
        throw ImpossibleConditioningEvent("conditioning event of '" + text + "' is impossible");
    const std::string key = ce_key(a, h);
    if (auto it = cache_.find(key); it != cache_.end())
        return it->second;
    if (auto it = cache_.find(ce_key(!a, h)); it != cache_.end())
        return remember(key, negate(it->second, fresh(text)).with_label(text));
    return remember(key, conditional_event(registry_, a, h, fresh(text)).with_label(text));
}

Crq Model::conjunction_of(const Crq& first, const Crq& second, const std::string& text)
{
    if (!first.conditional_view() || !second.conditional_view())
        throw PreconditionFailed("conjunction '" + text + "' needs conditional events on both sides");
    const auto& v1 = *first.conditional_view();
    const auto& v2 = *second.conditional_view();
    auto k1 = ce_key(v1.consequent, v1.condition);
    auto k2 = ce_key(v2.consequent, v2.condition);
    const std::string key = "conj:" + std::min(k1, k2) + "&" + std::max(k1, k2);
    if (auto it = cache_.find(key); it != cache_.end())
        return it->second;
    return remember(key, conjunction(first, second, fresh(text)).with_label(text));
}

Crq Model::quantity(const ExprPtr& e)
{
    const std::string text = to_string(*e);
    if (!is_conditional(*e))
        return conditional(event(e), Event::top(), text);

    switch (e->kind)
    {
        case Expr::Kind::Given:
        {
            const bool lc = is_conditional(*e->lhs);
            const bool rc = is_conditional(*e->rhs);
            if (!lc && !rc)
                return conditional(event(e->lhs), event(e->rhs), text);
            if (lc && !rc)
            {
                Crq inner = quantity(e->lhs);
                const Event k = event(e->rhs);
                const std::string key = "nest:" + key_of(inner) + "|" + bits(truth_table(*registry_, k));
                if (auto it = cache_.find(key); it != cache_.end())
                    return it->second;
                return remember(key, condition_on(inner, k, fresh(text)).with_label(text));
            }
            Crq inner = quantity(e->rhs);
            if (!inner.conditional_view())
                throw PreconditionFailed("antecedent of '" + text + "' must be a conditional event");
            const auto& vi = *inner.conditional_view();
            const std::string inner_key = ce_key(vi.consequent, vi.condition);

            Event consequent = Event::top();
            std::optional<Crq> outer;
            if (!lc)
            {
                consequent = event(e->lhs);
            }
            else
            {
                outer = quantity(e->lhs);
                if (!outer->conditional_view())
                    throw PreconditionFailed("consequent of '" + text + "' must be a conditional event");
                const auto& vo = *outer->conditional_view();
                if (truth_table(*registry_, vo.condition).all())
                {
                    consequent = vo.consequent;
                    outer.reset();
                }
            }
            if (!outer)
            {
                const std::string key = "its:" + bits(truth_table(*registry_, consequent)) + "|" + inner_key;
                if (auto it = cache_.find(key); it != cache_.end())
                    return it->second;
                return remember(key, iterated_simple(inner, consequent, fresh(text)).with_label(text));
            }
            const auto& vo = *outer->conditional_view();
            const std::string key = "it:" + ce_key(vo.consequent, vo.condition) + "|" + inner_key;
            if (auto it = cache_.find(key); it != cache_.end())
                return it->second;
            Symbol mu = fresh(text);
            Crq conj = conjunction_of(inner, *outer, to_string(*Expr::conjunction(e->rhs, e->lhs)));
            return remember(key, iterated(inner, *outer, mu, conj.own_symbol()).with_label(text));
        }
        case Expr::Kind::Not:
        {
            Crq q = quantity(e->lhs);
            if (const auto& v = q.conditional_view())
                return conditional(!v->consequent, v->condition, text);
            const std::string key = "neg:" + key_of(q);
            if (auto it = cache_.find(key); it != cache_.end())
                return it->second;
            return remember(key, negate(q, fresh(text)).with_label(text));
        }
        case Expr::Kind::And:
        {
            Crq a = quantity(e->lhs);
            Crq b = quantity(e->rhs);
            return conjunction_of(a, b, text);
        }
        case Expr::Kind::Or:
            throw PreconditionFailed("disjunction of conditionals is not supported: '" + text + "'");
        default:
            break;
    }
    throw PreconditionFailed("unsupported expression '" + text + "'");
}

Assessment Model::assessment()
{
    std::vector<AssessedItem> items;
    for (const auto& s : doc_->statements)
        items.push_back({quantity(s.target), s.value});
    Valuation params;
    for (const auto& s : doc_->parameters)
    {
        Crq q = quantity(s.target);
        auto [it, inserted] = params.emplace(q.own_symbol(), s.value);
        if (!inserted && it->second != s.value)
            throw InvalidAssessment("parameter '" + to_string(*s.target) + "' given two values");
    }
    return Assessment(registry_, std::move(items), std::move(params));
}

}  // namespace cohere
