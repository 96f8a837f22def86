#include "scriptorium/chrono.hpp"

#include <cctype>

#include "scriptorium/error.hpp"

namespace scriptorium::chrono {

namespace {

Era era_of(const std::ssub_match& m) { return m.matched ? Era::bce : Era::ce; }

int to_int(const std::ssub_match& m) { return std::stoi(m.str()); }

int checked_year(int y) {
  if (y < 1) throw Error(Errc::unrecognized_expression, "year must be at least 1 (there is no year 0 in CE/BCE notation)");
  return y;
}

int checked_century(int n) {
  if (n < 1) throw Error(Errc::unrecognized_expression, "century number must be at least 1");
  return n;
}

std::string canonicalize(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(uc));
  }
  return out;
}

TimeGrammar make_standard() {
  TimeGrammar g;
  const std::string ord = R"((\d{1,2})(?:st|nd|rd|th))";
  const std::string era = R"((?: ?(bce))?)";
  g.add_form("year", "1500 BCE", R"((\d{1,4}))" + era, [](const std::smatch& m) -> SimpleExpression {
    return Year{checked_year(to_int(m[1])), era_of(m[2])};
  });
  g.add_form("circa", "ca. 1920", R"((?:ca\.?|circa) ?(\d{1,4}))" + era,
             [](const std::smatch& m) -> SimpleExpression {
               return CircaYear{checked_year(to_int(m[1])), era_of(m[2])};
             });
  g.add_form("decade", "decade of 1970", R"(decade of (\d{1,4}))", [](const std::smatch& m) -> SimpleExpression {
    int y = to_int(m[1]);
    if (y % 10 != 0)
      throw Error(Errc::decade_not_aligned, "decade must end in 0: 'decade of " + m[1].str() + "'");
    return Decade{y};
  });
  g.add_form("century", "4th century", ord + " century" + era, [](const std::smatch& m) -> SimpleExpression {
    return Century{checked_century(to_int(m[1])), era_of(m[2])};
  });
  g.add_form("century-half", "1st half 4th century", R"((1st|2nd) half (?:of )?)" + ord + " century" + era,
             [](const std::smatch& m) -> SimpleExpression {
               auto part = m[1].str() == "1st" ? CenturyPart::first_half : CenturyPart::second_half;
               return CenturyFraction{part, checked_century(to_int(m[2])), era_of(m[3])};
             });
  g.add_form("century-third", "beginning of 18th century",
             R"((beginning|middle|end) of (?:the )?)" + ord + " century" + era,
             [](const std::smatch& m) -> SimpleExpression {
               auto w = m[1].str();
               auto part = w == "beginning" ? CenturyPart::beginning
                           : w == "middle"  ? CenturyPart::middle
                                            : CenturyPart::end;
               return CenturyFraction{part, checked_century(to_int(m[2])), era_of(m[3])};
             });
  return g;
}

std::string era_suffix(Era e) { return e == Era::bce ? " BCE" : ""; }

std::string_view part_name(CenturyPart p) {
  switch (p) {
    case CenturyPart::first_half: return "first-half";
    case CenturyPart::second_half: return "second-half";
    case CenturyPart::beginning: return "beginning";
    case CenturyPart::middle: return "middle";
    case CenturyPart::end: return "end";
  }
  return "";
}

std::string_view era_name(Era e) { return e == Era::bce ? "BCE" : "CE"; }

std::string pad(int v, int width) {
  auto s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

const TimeGrammar& TimeGrammar::standard() {
  static const TimeGrammar g = make_standard();
  return g;
}

void TimeGrammar::add_form(std::string name, std::string example, const std::string& pattern, Builder build) {
  forms_.push_back(Form{std::move(name), std::move(example),
                        std::regex("^" + pattern + "$", std::regex::icase | std::regex::ECMAScript),
                        std::move(build)});
}

std::optional<SimpleExpression> TimeGrammar::match_simple(const std::string& canonical) const {
  for (const auto& f : forms_) {
    std::smatch m;
    if (std::regex_match(canonical, m, f.pattern)) return f.build(m);
  }
  return std::nullopt;
}

std::string TimeGrammar::accepted_forms() const {
  std::string out;
  for (const auto& f : forms_) {
    if (!out.empty()) out += "; ";
    out += "'" + f.example + "'";
  }
  return out + "; ranges '<expr> - <expr>'";
}

TimeExpression parse_time_expression(std::string_view text, const TimeGrammar& grammar) {
  const std::string canon = canonicalize(text);
  auto unrecognized = [&] {
    return Error(Errc::unrecognized_expression,
                 "unrecognized time expression '" + std::string(text) + "'; accepted forms: " +
                     grammar.accepted_forms());
  };
  if (canon.empty()) throw unrecognized();

  if (auto simple = grammar.match_simple(canon)) {
    return std::visit([](auto&& v) -> TimeExpression { return v; }, *simple);
  }

  std::vector<size_t> dashes;
  for (size_t i = 0; i < canon.size(); ++i)
    if (canon[i] == '-') dashes.push_back(i);
  if (dashes.empty()) throw unrecognized();

  auto side = [](const std::string& s, size_t b, size_t e) {
    while (b < e && s[b] == ' ') ++b;
    while (e > b && s[e - 1] == ' ') --e;
    return s.substr(b, e - b);
  };

  for (size_t d : dashes) {
    auto lhs = grammar.match_simple(side(canon, 0, d));
    if (!lhs) continue;
    auto rhs = grammar.match_simple(side(canon, d + 1, canon.size()));
    if (!rhs) continue;
    return Range{*lhs, *rhs};
  }

  if (dashes.size() >= 2) {
    // Every piece being a valid operand means the input was a chained range.
    size_t start = 0;
    bool all_simple = true;
    for (size_t i = 0; i <= dashes.size() && all_simple; ++i) {
      size_t end = i < dashes.size() ? dashes[i] : canon.size();
      all_simple = grammar.match_simple(side(canon, start, end)).has_value();
      start = end + 1;
    }
    if (all_simple) throw Error(Errc::nested_range, "ranges cannot be nested: '" + std::string(text) + "'");
  }
  throw unrecognized();
}

std::string ordinal(int n) {
  int mod100 = n % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (n % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(n) + suffix;
}

std::string print(const SimpleExpression& expr) {
  struct Printer {
    std::string operator()(const Year& y) const { return std::to_string(y.year) + era_suffix(y.era); }
    std::string operator()(const CircaYear& y) const { return "ca. " + std::to_string(y.year) + era_suffix(y.era); }
    std::string operator()(const Decade& d) const { return "decade of " + std::to_string(d.start_year); }
    std::string operator()(const Century& c) const { return ordinal(c.number) + " century" + era_suffix(c.era); }
    std::string operator()(const CenturyFraction& c) const {
      std::string tail = ordinal(c.number) + " century" + era_suffix(c.era);
      switch (c.part) {
        case CenturyPart::first_half: return "1st half " + tail;
        case CenturyPart::second_half: return "2nd half " + tail;
        case CenturyPart::beginning: return "beginning of " + tail;
        case CenturyPart::middle: return "middle of " + tail;
        case CenturyPart::end: return "end of " + tail;
      }
      return tail;
    }
    std::string operator()(const YearMonthDay& d) const {
      std::string s = pad(d.year, 4);
      if (d.month) s += "-" + pad(*d.month, 2);
      if (d.day) s += "-" + pad(*d.day, 2);
      return s + era_suffix(d.era);
    }
  };
  return std::visit(Printer{}, expr);
}

std::string print(const TimeExpression& expr) {
  if (const auto* r = std::get_if<Range>(&expr)) return print(r->lhs) + " - " + print(r->rhs);
  return std::visit(
      [](auto&& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Range>)
          return {};
        else
          return print(SimpleExpression{v});
      },
      expr);
}

namespace {

std::string describe_simple(const SimpleExpression& expr) {
  struct Describer {
    std::string operator()(const Year& y) const {
      return "Year(" + std::to_string(y.year) + ", " + std::string(era_name(y.era)) + ")";
    }
    std::string operator()(const CircaYear& y) const {
      return "CircaYear(" + std::to_string(y.year) + ", " + std::string(era_name(y.era)) + ")";
    }
    std::string operator()(const Decade& d) const { return "Decade(" + std::to_string(d.start_year) + ")"; }
    std::string operator()(const Century& c) const {
      return "Century(" + std::to_string(c.number) + ", " + std::string(era_name(c.era)) + ")";
    }
    std::string operator()(const CenturyFraction& c) const {
      return "CenturyPart(" + std::string(part_name(c.part)) + ", " + std::to_string(c.number) + ", " +
             std::string(era_name(c.era)) + ")";
    }
    std::string operator()(const YearMonthDay& d) const {
      return "YearMonthDay(" + std::to_string(d.year) + ", " + (d.month ? std::to_string(*d.month) : "-") + ", " +
             (d.day ? std::to_string(*d.day) : "-") + ", " + std::string(era_name(d.era)) + ")";
    }
  };
  return std::visit(Describer{}, expr);
}

}  // namespace

std::string describe(const TimeExpression& expr) {
  if (const auto* r = std::get_if<Range>(&expr))
    return "Range(" + describe_simple(r->lhs) + ", " + describe_simple(r->rhs) + ")";
  return std::visit(
      [](auto&& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Range>)
          return {};
        else
          return describe_simple(SimpleExpression{v});
      },
      expr);
}

int astronomical_year(int year, Era era) { return era == Era::bce ? 1 - year : year; }

TimeSpan century_span(int n, Era era) {
  if (era == Era::ce) return {100 * (n - 1) + 1, 100 * n};
  return {1 - 100 * n, -100 * (n - 1)};
}

TimeSpan normalize_to_span(const SimpleExpression& expr, const NormalizeOptions& options) {
  struct Normalizer {
    const NormalizeOptions& opt;
    TimeSpan operator()(const Year& y) const {
      int a = astronomical_year(y.year, y.era);
      return {a, a};
    }
    TimeSpan operator()(const CircaYear& y) const {
      int a = astronomical_year(y.year, y.era);
      return {a - opt.circa_radius, a + opt.circa_radius};
    }
    TimeSpan operator()(const Decade& d) const { return {d.start_year, d.start_year + 9}; }
    TimeSpan operator()(const Century& c) const { return century_span(c.number, c.era); }
    TimeSpan operator()(const CenturyFraction& c) const {
      auto whole = century_span(c.number, c.era);
      int s = whole.earliest;
      switch (c.part) {
        case CenturyPart::first_half: return {s, s + 49};
        case CenturyPart::second_half: return {s + 50, whole.latest};
        // 33 / 34 / 33 years.
        case CenturyPart::beginning: return {s, s + 32};
        case CenturyPart::middle: return {s + 33, s + 66};
        case CenturyPart::end: return {s + 67, whole.latest};
      }
      return whole;
    }
    TimeSpan operator()(const YearMonthDay& d) const {
      int a = astronomical_year(d.year, d.era);
      return {a, a};
    }
  };
  return std::visit(Normalizer{options}, expr);
}

TimeSpan normalize_to_span(const TimeExpression& expr, const NormalizeOptions& options) {
  if (const auto* r = std::get_if<Range>(&expr)) {
    auto lo = normalize_to_span(r->lhs, options);
    auto hi = normalize_to_span(r->rhs, options);
    if (lo.earliest > hi.latest)
      throw Error(Errc::inverted_range, "range '" + print(expr) + "' ends before it starts");
    return {lo.earliest, hi.latest};
  }
  return std::visit(
      [&](auto&& v) -> TimeSpan {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Range>)
          return {};
        else
          return normalize_to_span(SimpleExpression{v}, options);
      },
      expr);
}

TimeSpan normalize(std::string_view text, const NormalizeOptions& options) {
  return normalize_to_span(parse_time_expression(text), options);
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::equal: return "equal";
    case Relation::within: return "within";
    case Relation::contains: return "contains";
    case Relation::overlaps: return "overlaps";
    case Relation::disjoint: return "disjoint";
  }
  return "";
}

Relation span_relation(const TimeSpan& a, const TimeSpan& b) {
  if (a == b) return Relation::equal;
  if (within(a, b)) return Relation::within;
  if (within(b, a)) return Relation::contains;
  if (overlaps(a, b)) return Relation::overlaps;
  return Relation::disjoint;
}

}  // namespace scriptorium::chrono
