#pragma once

#include <functional>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scriptorium::chrono {

enum class Era { ce, bce };

enum class CenturyPart { first_half, second_half, beginning, middle, end };

struct Year {
  int year = 0;
  Era era = Era::ce;
  bool operator==(const Year&) const = default;
};

struct CircaYear {
  int year = 0;
  Era era = Era::ce;
  bool operator==(const CircaYear&) const = default;
};

struct Decade {
  int start_year = 0;
  bool operator==(const Decade&) const = default;
};

struct Century {
  int number = 0;
  Era era = Era::ce;
  bool operator==(const Century&) const = default;
};

struct CenturyFraction {
  CenturyPart part = CenturyPart::first_half;
  int number = 0;
  Era era = Era::ce;
  bool operator==(const CenturyFraction&) const = default;
};

/// Calendar date down to an optional month/day. Not produced by the
/// standard grammar; installations register a form that yields it.
struct YearMonthDay {
  int year = 0;
  std::optional<int> month;
  std::optional<int> day;
  Era era = Era::ce;
  bool operator==(const YearMonthDay&) const = default;
};

using SimpleExpression = std::variant<Year, CircaYear, Decade, Century, CenturyFraction, YearMonthDay>;

/// Ranges hold simple operands only, so nesting is unrepresentable.
struct Range {
  SimpleExpression lhs;
  SimpleExpression rhs;
  bool operator==(const Range&) const = default;
};

using TimeExpression = std::variant<Year, CircaYear, Decade, Century, CenturyFraction, YearMonthDay, Range>;

/// Closed interval of astronomical years (year 0 == 1 BCE).
struct TimeSpan {
  int earliest = 0;
  int latest = 0;
  bool operator==(const TimeSpan&) const = default;
};

struct NormalizeOptions {
  int circa_radius = 10;
};

/// Table of accepted surface forms. Each form is a case-insensitive regex
/// over the whitespace-collapsed input plus a builder for the match.
class TimeGrammar {
 public:
  using Builder = std::function<SimpleExpression(const std::smatch&)>;

  struct Form {
    std::string name;
    std::string example;
    std::regex pattern;
    Builder build;
  };

  TimeGrammar() = default;

  /// Years, circa, decades, centuries, halves, beginning/middle/end.
  static const TimeGrammar& standard();

  void add_form(std::string name, std::string example, const std::string& pattern, Builder build);
  const std::vector<Form>& forms() const noexcept { return forms_; }

  std::optional<SimpleExpression> match_simple(const std::string& canonical) const;
  std::string accepted_forms() const;

 private:
  std::vector<Form> forms_;
};

TimeExpression parse_time_expression(std::string_view text,
                                     const TimeGrammar& grammar = TimeGrammar::standard());

/// Canonical surface form; parse(print(e)) == e.
std::string print(const TimeExpression& expr);
std::string print(const SimpleExpression& expr);

/// Structural rendering such as "CenturyPart(first-half, 4, CE)".
std::string describe(const TimeExpression& expr);

TimeSpan normalize_to_span(const TimeExpression& expr, const NormalizeOptions& options = {});
TimeSpan normalize_to_span(const SimpleExpression& expr, const NormalizeOptions& options = {});

/// Parse and normalize in one step.
TimeSpan normalize(std::string_view text, const NormalizeOptions& options = {});

int astronomical_year(int year, Era era);
TimeSpan century_span(int number, Era era);

enum class Relation { equal, within, contains, overlaps, disjoint };

std::string_view to_string(Relation r);

inline bool within(const TimeSpan& a, const TimeSpan& b) {
  return b.earliest <= a.earliest && a.latest <= b.latest;
}

inline bool overlaps(const TimeSpan& a, const TimeSpan& b) {
  return a.earliest <= b.latest && b.earliest <= a.latest;
}

Relation span_relation(const TimeSpan& a, const TimeSpan& b);

std::string ordinal(int n);

}  // namespace scriptorium::chrono
