#include <gtest/gtest.h>

#include <map>
#include <random>

#include "scriptorium/chrono.hpp"
#include "scriptorium/error.hpp"
#include "testkit.hpp"

using namespace scriptorium;
using namespace scriptorium::chrono;

namespace {

Errc code_of(std::string_view text) {
  try {
    parse_time_expression(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for '" << text << "'";
  return Errc::io;
}

}  // namespace

TEST(ChronoParse, ReferenceForms) {
  EXPECT_EQ(describe(parse_time_expression("1st half 4th century")), "CenturyPart(first-half, 4, CE)");
  auto range = parse_time_expression("3rd century - 5th century");
  ASSERT_TRUE(std::holds_alternative<Range>(range));
  EXPECT_EQ(std::get<Range>(range), (Range{Century{3, Era::ce}, Century{5, Era::ce}}));
  EXPECT_EQ(parse_time_expression("1500 BCE"), TimeExpression(Year{1500, Era::bce}));
  EXPECT_EQ(parse_time_expression("ca. 1920"), TimeExpression(CircaYear{1920, Era::ce}));
  EXPECT_EQ(parse_time_expression("decade of 1970"), TimeExpression(Decade{1970}));
}

TEST(ChronoParse, CaseAndWhitespaceAreFlexible) {
  EXPECT_EQ(parse_time_expression("  DECADE   of 1970 "), TimeExpression(Decade{1970}));
  EXPECT_EQ(parse_time_expression("Ca. 1920 bce"), TimeExpression(CircaYear{1920, Era::bce}));
  EXPECT_EQ(parse_time_expression("circa 1920"), TimeExpression(CircaYear{1920, Era::ce}));
  EXPECT_EQ(parse_time_expression("21st Century"), TimeExpression(Century{21, Era::ce}));
  EXPECT_EQ(parse_time_expression("2nd half 22nd century"),
            TimeExpression(CenturyFraction{CenturyPart::second_half, 22, Era::ce}));
  EXPECT_EQ(parse_time_expression("end of 3rd century BCE"),
            TimeExpression(CenturyFraction{CenturyPart::end, 3, Era::bce}));
}

TEST(ChronoParse, Errors) {
  EXPECT_EQ(code_of("decade of 1973"), Errc::decade_not_aligned);
  EXPECT_EQ(code_of("sometime in spring"), Errc::unrecognized_expression);
  EXPECT_EQ(code_of(""), Errc::unrecognized_expression);
  // Inversion depends on the circa radius, so it surfaces at normalization.
  try {
    normalize("1800 - 1700");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::inverted_range);
  }
  EXPECT_EQ(code_of("1700 - 1750 - 1800"), Errc::nested_range);
}

TEST(ChronoParse, UnrecognizedListsAcceptedForms) {
  try {
    parse_time_expression("the reign of Justinian");
    FAIL();
  } catch (const Error& e) {
    std::string msg = e.what();
    for (const auto& form : TimeGrammar::standard().forms()) EXPECT_NE(msg.find(form.example), std::string::npos);
  }
}

TEST(ChronoNormalize, ReferenceSpans) {
  EXPECT_EQ(normalize("decade of 1970"), (TimeSpan{1970, 1979}));
  EXPECT_EQ(normalize("ca. 1920"), (TimeSpan{1910, 1930}));
  EXPECT_EQ(normalize("1st half 4th century"), (TimeSpan{301, 350}));
  EXPECT_EQ(normalize("1500 BCE"), (TimeSpan{-1499, -1499}));
  EXPECT_EQ(normalize("3rd century - 5th century"), (TimeSpan{201, 500}));
}

TEST(ChronoNormalize, Rules) {
  EXPECT_EQ(astronomical_year(1, Era::bce), 0);
  EXPECT_EQ(century_span(1, Era::ce), (TimeSpan{1, 100}));
  EXPECT_EQ(century_span(18, Era::ce), (TimeSpan{1701, 1800}));
  EXPECT_EQ(century_span(1, Era::bce), (TimeSpan{-99, 0}));
  EXPECT_EQ(normalize("2nd half 4th century"), (TimeSpan{351, 400}));
  EXPECT_EQ(normalize("ca. 1920", {.circa_radius = 25}), (TimeSpan{1895, 1945}));
  // Thirds partition the century.
  auto b = normalize("beginning of 18th century"), m = normalize("middle of 18th century"),
       e = normalize("end of 18th century");
  EXPECT_EQ(b.earliest, 1701);
  EXPECT_EQ(m.earliest, b.latest + 1);
  EXPECT_EQ(e.earliest, m.latest + 1);
  EXPECT_EQ(e.latest, 1800);
}

TEST(ChronoNormalize, CenturyFormulaMatchesYearClassification) {
  // Classify every year independently, then compare the extremes of each
  // class with the formula.
  std::map<std::tuple<int, Era, int>, TimeSpan> seen;  // (century, era, half) -> span
  auto note = [&](std::tuple<int, Era, int> key, int y) {
    auto [it, fresh] = seen.try_emplace(key, TimeSpan{y, y});
    it->second.earliest = std::min(it->second.earliest, y);
    it->second.latest = std::max(it->second.latest, y);
  };
  for (int y = -2099; y <= 2100; ++y) {
    if (y >= 1) {
      const int n = (y - 1) / 100 + 1, half = (y - 1) % 100 < 50 ? 1 : 2;
      note({n, Era::ce, 0}, y);
      note({n, Era::ce, half}, y);
    } else {
      const int bce = 1 - y, n = (bce - 1) / 100 + 1;
      const int offset = y - (1 - 100 * n);
      note({n, Era::bce, 0}, y);
      note({n, Era::bce, offset < 50 ? 1 : 2}, y);
    }
  }
  for (Era era : {Era::ce, Era::bce}) {
    const std::string suffix = era == Era::bce ? " BCE" : "";
    for (int n = 1; n <= 21; ++n) {
      EXPECT_EQ(century_span(n, era), (seen.at({n, era, 0}))) << n;
      EXPECT_EQ(normalize(ordinal(n) + " century" + suffix), (seen.at({n, era, 0}))) << n;
      EXPECT_EQ(normalize("1st half " + ordinal(n) + " century" + suffix), (seen.at({n, era, 1}))) << n;
      EXPECT_EQ(normalize("2nd half " + ordinal(n) + " century" + suffix), (seen.at({n, era, 2}))) << n;
    }
  }
}

TEST(ChronoProperties, PrintParseFixpointAndMonotone) {
  testkit::Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto text = testkit::random_time_expression(rng);
    auto ast = parse_time_expression(text);
    EXPECT_EQ(parse_time_expression(print(ast)), ast) << text;
    auto span = normalize_to_span(ast);
    EXPECT_LE(span.earliest, span.latest) << text;
  }
}

TEST(ChronoProperties, EraConsistency) {
  for (int n = 1; n <= 3000; ++n) {
    auto bce = normalize(std::to_string(n) + " BCE"), ce = normalize(std::to_string(n));
    EXPECT_FALSE(overlaps(bce, ce)) << n;
  }
  for (int n = 1; n <= 21; ++n)
    EXPECT_FALSE(overlaps(century_span(n, Era::bce), century_span(n, Era::ce))) << n;
}

TEST(ChronoRelations, Examples) {
  EXPECT_TRUE(within({1710, 1730}, {1701, 1800}));
  EXPECT_TRUE(overlaps({201, 500}, {450, 600}));
  EXPECT_FALSE(within({201, 500}, {450, 600}));
  EXPECT_EQ(span_relation({5, 9}, {5, 9}), Relation::equal);
  EXPECT_EQ(span_relation({1710, 1730}, {1701, 1800}), Relation::within);
  EXPECT_EQ(span_relation({1701, 1800}, {1710, 1730}), Relation::contains);
  EXPECT_EQ(span_relation({201, 500}, {450, 600}), Relation::overlaps);
  EXPECT_EQ(span_relation({1, 2}, {3, 4}), Relation::disjoint);
}

TEST(ChronoRelations, ClassificationAgreesWithPredicates) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int i = 0; i < 5000; ++i) {
    int a0 = d(rng), a1 = d(rng), b0 = d(rng), b1 = d(rng);
    TimeSpan a{std::min(a0, a1), std::max(a0, a1)}, b{std::min(b0, b1), std::max(b0, b1)};
    auto r = span_relation(a, b);
    EXPECT_EQ(r == Relation::disjoint, !overlaps(a, b));
    EXPECT_EQ(r == Relation::within || r == Relation::equal, within(a, b));
    EXPECT_EQ(r == Relation::contains || r == Relation::equal, within(b, a));
  }
}

TEST(ChronoGrammar, TableAcceptsNewForms) {
  TimeGrammar g = TimeGrammar::standard();
  g.add_form("iso-date", "1821-03-25", R"((\d{4})-(\d{2})-(\d{2}))", [](const std::smatch& m) -> SimpleExpression {
    return YearMonthDay{std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), Era::ce};
  });
  auto e = parse_time_expression("1821-03-25", g);
  EXPECT_EQ(normalize_to_span(e), (TimeSpan{1821, 1821}));
  EXPECT_THROW(parse_time_expression("1821-03-25"), Error);
}
