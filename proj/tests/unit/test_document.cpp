#include "doctest.h"

#include <random>

#include "cohere/document.hpp"
#include "cohere/errors.hpp"
#include "oracles.hpp"

using namespace cohere;
using oracle::R;

namespace {

std::string error_of(std::string_view text)
{
    try
    {
        parse_document(text);
    }
    catch (const std::exception& e)
    {
        return e.what();
    }
    return "";
}

class DocumentGenerator
{
    public:
        explicit DocumentGenerator(unsigned seed) : rng_(seed) {}

        AssessmentDocument next()
        {
            AssessmentDocument d;
            std::size_t n = 1 + rng_() % 4;
            for (std::size_t i = 0; i < n; ++i)
                d.atoms.push_back(std::string(1, static_cast<char>('A' + i)) + (rng_() % 2 ? "" : "x_1"));
            names_ = d.atoms;
            std::size_t defs = rng_() % 3;
            for (std::size_t i = 0; i < defs; ++i)
            {
                Definition def{"D" + std::to_string(i), event(2)};
                d.definitions.push_back(def);
                names_.push_back(def.name);
            }
            std::size_t stmts = rng_() % 4;
            for (std::size_t i = 0; i < stmts; ++i)
                d.statements.push_back({conditional(2), value()});
            if (rng_() % 3 == 0)
                d.parameters.push_back({conditional(1), value()});
            if (rng_() % 2)
            {
                auto kinds = {QueryKind::Check, QueryKind::Extend, QueryKind::Mp, QueryKind::DutchBook,
                              QueryKind::Table};
                QueryKind k = *(kinds.begin() + rng_() % 5);
                d.query = Query{k, rng_() % 2 ? conditional(1) : nullptr};
            }
            return d;
        }

    private:
        ExprPtr event(int depth)
        {
            switch (depth <= 0 ? rng_() % 3 : rng_() % 7)
            {
                case 0: return Expr::named(names_[rng_() % names_.size()]);
                case 1: return Expr::named(names_[rng_() % names_.size()]);
                case 2: return rng_() % 2 ? Expr::top() : Expr::bottom();
                case 3: return Expr::negation(event(depth - 1));
                case 4: return Expr::conjunction(event(depth - 1), event(depth - 1));
                case 5: return Expr::disjunction(event(depth - 1), event(depth - 1));
                default: return Expr::negation(Expr::conjunction(event(depth - 1), event(depth - 1)));
            }
        }

        ExprPtr conditional(int depth)
        {
            switch (depth <= 0 ? rng_() % 2 : rng_() % 5)
            {
                case 0: return event(2);
                case 1: return Expr::given(event(2), event(2));
                case 2: return Expr::given(conditional(depth - 1), conditional(depth - 1));
                case 3: return Expr::conjunction(conditional(depth - 1), conditional(depth - 1));
                default: return Expr::negation(conditional(depth - 1));
            }
        }

        Rational value()
        {
            return Rational(static_cast<long>(rng_() % 41) - 20, 1 + static_cast<long>(rng_() % 12));
        }

        std::mt19937 rng_;
        std::vector<std::string> names_;
};

}  // namespace

TEST_CASE("parse the modus ponens document")
{
    auto d = parse_document("atoms A C H\nassess P(A given H) = 1/2\nassess P(C given (A given H)) = 1/2\nquery extend C");
    CHECK(d.atoms == std::vector<std::string>{"A", "C", "H"});
    REQUIRE(d.statements.size() == 2);
    CHECK(to_string(*d.statements[1].target) == "C given (A given H)");
    CHECK(d.statements[0].value == R(1, 2));
    REQUIRE(d.query);
    CHECK(d.query->kind == QueryKind::Extend);
    CHECK(to_string(*d.query->target) == "C");
}

TEST_CASE("decimals, comments, definitions and parameters")
{
    auto d = parse_document("# header\n\natoms A B   # two atoms\ndefine AB = A & B\nassess P(AB) = 0.25\n"
                            "param P(B given A) = -1/3\nquery check\n");
    CHECK(d.statements[0].value == R(1, 4));
    REQUIRE(d.definitions.size() == 1);
    CHECK(to_string(*d.definitions[0].expr) == "A & B");
    REQUIRE(d.parameters.size() == 1);
    CHECK(d.parameters[0].value == R(-1, 3));
    CHECK_FALSE(d.query->target);
}

TEST_CASE("precedence")
{
    CHECK(to_string(*parse_expression("!A & B | C")) == "!A & B | C");
    CHECK(to_string(*parse_expression("!(A & B) | C")) == "!(A & B) | C");
    CHECK(to_string(*parse_expression("A & (B | C) given H")) == "A & (B | C) given H");
    CHECK(to_string(*parse_expression("P((B given K) given (A given H))")) == "(B given K) given (A given H)");
    auto e = parse_expression("A | B & C");
    CHECK(e->kind == Expr::Kind::Or);
    CHECK(e->rhs->kind == Expr::Kind::And);
    CHECK(to_string(*parse_expression("(A given H) & (B given K)")) == "(A given H) & (B given K)");
}

TEST_CASE("diagnostics carry line and column")
{
    CHECK(error_of("atoms A\nassess P(A given) = 1") == "line 2, column 17: expected an event, found ')'");
    CHECK(error_of("atoms A\nassess P(A) 1/2") == "line 2, column 13: expected '=', found '1/2'");
    CHECK(error_of("atoms A\nassess P(A) = x") == "line 2, column 15: expected a rational value, found 'x'");
    CHECK(error_of("atoms A\nassess P(A) = 1/0").rfind("line 2, column 15:", 0) == 0);
    CHECK(error_of("atoms A\nfrobnicate").rfind("line 2, column 1:", 0) == 0);
    CHECK(error_of("atoms A A").rfind("line 1, column 9:", 0) == 0);
    CHECK(error_of("atoms A\nquery nothing").rfind("line 2, column 7:", 0) == 0);
    CHECK(error_of("atoms A\nassess P(A) = 1 2").rfind("line 2, column 17:", 0) == 0);
    CHECK(error_of("atoms A\nassess P(A) = 1 $").rfind("line 2, column 17:", 0) == 0);
    CHECK_THROWS_AS(parse_document("atoms A\nassess P(B) = 1"), UndeclaredAtom);
    CHECK_THROWS_AS(parse_document("atoms A\nassess P(A given (B)) = 1"), UndeclaredAtom);
    CHECK_THROWS_AS(parse_document("atoms A\nassess A = 1"), ParseError);
    CHECK_THROWS_AS(parse_document("atoms A\ndefine X = A given A"), ParseError);
}

TEST_CASE("round trip on generated documents")
{
    DocumentGenerator gen(42);
    for (int i = 0; i < 400; ++i)
    {
        AssessmentDocument d = gen.next();
        std::string text = serialize(d);
        INFO(text);
        AssessmentDocument back = parse_document(text);
        CHECK(back == d);
        CHECK(serialize(back) == text);
    }
}

TEST_CASE("model builds quantities with the right provenance")
{
    auto d = parse_document("atoms A B C H K\n"
                            "assess P(A given H) = 1/2\n"
                            "assess P(C given (A given H)) = 1/2\n"
                            "assess P((B given K) given (A given H)) = 1/3\n"
                            "assess P((A given H) & (B given K)) = 1/6\n"
                            "assess P(!(C given (A given H))) = 1/2\n"
                            "assess P((A given H) given (H | K)) = 1/2\n"
                            "param P(B given K) = 1/2\n");
    Model m(d);
    CHECK(m.quantity(d.statements[0].target).provenance() == Provenance::ConditionalEvent);
    CHECK(m.quantity(d.statements[1].target).provenance() == Provenance::IteratedSimple);
    CHECK(m.quantity(d.statements[2].target).provenance() == Provenance::Iterated);
    CHECK(m.quantity(d.statements[3].target).provenance() == Provenance::Conjunction);
    CHECK(m.quantity(d.statements[4].target).provenance() == Provenance::Negation);
    CHECK(m.quantity(d.statements[5].target).provenance() == Provenance::Nested);
    // The iterated conditional reuses the conjunction symbol.
    Crq it = m.quantity(d.statements[2].target);
    Crq conj = m.quantity(d.statements[3].target);
    CHECK(it.payoffs().back().symbols().count(conj.own_symbol()) == 0);  // AHBK row is 1
    bool uses_z = false;
    for (const auto& p : it.payoffs())
        uses_z = uses_z || p.symbols().count(conj.own_symbol());
    CHECK(uses_z);
    Assessment a = m.assessment();
    CHECK(a.size() == 6);
    CHECK(a.missing_symbols().empty());
}

TEST_CASE("model identifies quantities semantically")
{
    auto d = parse_document("atoms A H\ndefine AH = A & H\n"
                            "assess P(A given H) = 1/2\n"
                            "assess P(AH given H) = 1/2\n"
                            "assess P(!A given H) = 1/2\n"
                            "assess P(!(A given H)) = 1/2\n");
    Model m(d);
    Crq first = m.quantity(d.statements[0].target);
    CHECK(m.quantity(d.statements[1].target).own_symbol() == first.own_symbol());
    Crq neg = m.quantity(d.statements[2].target);
    CHECK(neg.provenance() == Provenance::Negation);
    CHECK(neg.prevision() == 1 - Polynomial::variable(first.own_symbol()));
    CHECK(m.quantity(d.statements[3].target).own_symbol() == neg.own_symbol());
    CHECK(m.assessment().size() == 4);  // repeats with equal values are allowed

    auto clash = parse_document("atoms A H\nassess P(A given H) = 1/2\nassess P(A & H given H) = 1/3\n");
    Model mc(clash);
    CHECK_THROWS_AS(mc.assessment(), InvalidAssessment);
}

TEST_CASE("model errors")
{
    auto d = parse_document("atoms A C H\nassess P(A given BOT) = 1\n");
    Model m(d);
    CHECK_THROWS_AS(m.assessment(), ImpossibleConditioningEvent);

    auto deep = parse_document("atoms A C D H\nassess P(D given (C given (A given H))) = 1/2\n");
    Model md(deep);
    CHECK_THROWS_AS(md.assessment(), PreconditionFailed);

    auto dis = parse_document("atoms A H\nassess P((A given H) | A) = 1/2\n");
    Model mdis(dis);
    CHECK_THROWS_AS(mdis.assessment(), PreconditionFailed);

    Model plain(parse_document("atoms A\n"));
    CHECK_THROWS_AS(plain.quantity(parse_expression("Z given A")), UndeclaredAtom);
    CHECK_THROWS_AS(plain.event(parse_expression("A given A")), PreconditionFailed);
}
