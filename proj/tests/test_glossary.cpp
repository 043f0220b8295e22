#include <gtest/gtest.h>

#include "cdmn/glossary.hpp"
#include "support.hpp"

using namespace cdmn;
using cdmn::testing::vocabulary_of;

namespace {

const char* kAgathaGlossary =
    "type: Types\n"
    "Name | Type | Values\n"
    "Person | string | Agatha, Butler, Charles\n"
    "Number | int | [0..100]\n"
    "\n"
    "relation: Relations\n"
    "Name\n"
    "Person hates Person\n"
    "Person is richer than Person\n"
    "\n"
    "constant: Constants\n"
    "Name | Type\n"
    "Killer | Person\n"
    "\n"
    "function: Functions\n"
    "Name | Type\n"
    "Hatees of Person | Number\n"
    "\n"
    "boolean: Booleans\n"
    "Name\n"
    "Suicide\n";

ErrorCode vocab_error(const std::string& text) {
    try {
        vocabulary_of(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return ErrorCode::Io;
}

std::vector<Diagnostic> validation_of(const std::string& text) {
    RawModel raw = parse_model(text);
    std::vector<const RawBlock*> glossary;
    std::vector<const RawBlock*> data;
    for (const RawBlock& b : raw.blocks) {
        if (is_glossary(b.kind)) glossary.push_back(&b);
        if (b.kind == BlockKind::Data) data.push_back(&b);
    }
    Vocabulary v = complete_domains(build_vocabulary(glossary), data);
    return validate_data(v, data);
}

}  // namespace

TEST(Glossary, AgathaVocabulary) {
    Vocabulary v = vocabulary_of(kAgathaGlossary);
    EXPECT_EQ(v.user_sort_count(), 2u);
    const Sort& person = v.sort(*v.find_sort("Person"));
    EXPECT_EQ(person.size(), 3u);
    EXPECT_EQ(v.sort(*v.find_sort("Number")).size(), 101u);

    const SymbolDecl& hates = v.symbol(*v.find_symbol("Person hates Person"));
    EXPECT_EQ(hates.kind, SymbolKind::Relation);
    EXPECT_EQ(hates.arity(), 2u);
    const SymbolDecl& hatees = v.symbol(*v.find_symbol("Hatees of Person"));
    EXPECT_EQ(hatees.arity(), 1u);
    EXPECT_EQ(hatees.result_sort, *v.find_sort("Number"));
    EXPECT_EQ(v.symbol(*v.find_nullary("Killer")).result_sort, *v.find_sort("Person"));
    EXPECT_EQ(v.symbol(*v.find_nullary("Suicide")).kind, SymbolKind::Boolean);

    EXPECT_EQ(v.element_constants().size(), 3u);
    for (const char* name : {"Agatha", "Butler", "Charles"}) {
        const ElementConstant* c = v.find_element(name);
        ASSERT_NE(c, nullptr) << name;
        EXPECT_EQ(c->value, Value::atom(name));
    }
}

TEST(Glossary, PatternSlotsFollowSortOccurrences) {
    Vocabulary v = vocabulary_of(kAgathaGlossary);
    const SymbolDecl& richer = v.symbol(*v.find_symbol("Person is richer than Person"));
    ASSERT_EQ(richer.pattern.size(), 5u);
    std::vector<bool> slots;
    for (const PatternPart& p : richer.pattern) slots.push_back(p.is_slot);
    EXPECT_EQ(slots, (std::vector<bool>{true, false, false, false, true}));
    EXPECT_EQ(richer.pattern[0].sort, *v.find_sort("Person"));
}

TEST(Glossary, EmptyGlossary) {
    Vocabulary v = vocabulary_of("");
    EXPECT_EQ(v.user_sort_count(), 0u);
    EXPECT_TRUE(v.symbols().empty());
    EXPECT_TRUE(v.element_constants().empty());
}

TEST(Glossary, InferredDomainFromData) {
    Vocabulary v = vocabulary_of(corpus::read_file(cdmn::testing::fixture_path("map_one_way.cdmn")));
    const Sort& country = v.sort(*v.find_sort("Country"));
    EXPECT_EQ(country.domain_kind, DomainKind::Inferred);
    std::set<Value> got(country.values.begin(), country.values.end());
    std::set<Value> want;
    for (const char* c : {"Belgium", "France", "Luxembourg", "Netherlands", "Germany", "Denmark"}) {
        want.insert(Value::atom(c));
    }
    EXPECT_EQ(got, want);
    EXPECT_EQ(country.values.size(), 6u);
}

TEST(Glossary, ExplicitEnumerationWins) {
    Vocabulary v = vocabulary_of(std::string(kAgathaGlossary) +
                                 "\ndata: D\nPerson called p || Hatees of p\nAgatha || 2\nButler || 1\nCharles || 0\n");
    EXPECT_EQ(v.sort(*v.find_sort("Person")).size(), 3u);
}

TEST(Glossary, InferredIntDomainIsTheSeenValues) {
    Vocabulary v = vocabulary_of(
        "type: T\nName | Type | Values\nItem | string | a, b\nSize | int |\n\n"
        "function: F\nName | Type\nSize of Item | Size\n\n"
        "data: D\nItem || Size of Item\na || 3\nb || 7\n");
    const Sort& size = v.sort(*v.find_sort("Size"));
    EXPECT_EQ(size.elements(), (std::vector<Value>{Value(3), Value(7)}));
    EXPECT_FALSE(size.contains(Value(5)));
}

TEST(Glossary, ValidationFindsTypo) {
    std::vector<Diagnostic> d =
        validation_of(corpus::read_file(cdmn::testing::fixture_path("agatha_typo.cdmn")));
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, ErrorCode::ValueOutsideDomain);
    EXPECT_NE(d[0].message.find("Charless"), std::string::npos);
    EXPECT_NE(d[0].message.find("Person"), std::string::npos);
}

TEST(Glossary, ValidationAcceptsInferredSources) {
    EXPECT_TRUE(validation_of(corpus::read_file(cdmn::testing::fixture_path("map_one_way.cdmn"))).empty());
}

TEST(Glossary, ValidationFindsOutOfRange) {
    std::vector<Diagnostic> d = validation_of(
        std::string(kAgathaGlossary) + "\ndata: D\nPerson || Hatees of Person\nAgatha || 150\nButler || 1\nCharles || 0\n");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, ErrorCode::ValueOutsideDomain);
}

TEST(Glossary, Errors) {
    EXPECT_EQ(vocab_error("type: T\nName | Type | Values\nA | string | x\nA | int | [1..2]\n"),
              ErrorCode::DuplicateSort);
    EXPECT_EQ(vocab_error("constant: C\nName | Type\nK | int\nK | int\n"), ErrorCode::DuplicateSymbol);
    EXPECT_EQ(vocab_error("constant: C\nName | Type\nK | Nowhere\n"), ErrorCode::UnknownResultSort);
    EXPECT_EQ(vocab_error("type: T\nName | Type | Values\nA | int | 1, x\n"), ErrorCode::ValueOutsideBase);
    EXPECT_EQ(vocab_error("relation: R\nName\nit rains\n"), ErrorCode::ZeroSlotRelation);
    EXPECT_EQ(vocab_error("type: T\nName | Type | Values\nA | string |\n\nconstant: C\nName | Type\nK | A\n"),
              ErrorCode::EmptyInferredDomain);
}

TEST(Glossary, ParseBasicValue) {
    Sort s;
    s.base = BaseType::Int;
    EXPECT_EQ(parse_basic_value("12", s), Value(12));
    EXPECT_FALSE(parse_basic_value("1.5", s));
    s.base = BaseType::Float;
    EXPECT_EQ(parse_basic_value("1.5", s), Value(Rational(3, 2)));
    EXPECT_EQ(split_list(" a, b ,c "), (std::vector<std::string>{"a", "b", "c"}));
}
