#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scriptorium::text {

std::string trim(std::string_view s);

/// Unicode case fold (full folding, so "Straße" and "STRASSE" agree).
std::string casefold(std::string_view utf8);

/// Case fold, trim, collapse internal whitespace runs to one space.
/// This is the conservative form used when editors add terms.
std::string normalize_label(std::string_view utf8);

/// normalize_label plus diacritic stripping and punctuation removal. Only
/// used to propose duplicate candidates, never to merge automatically.
std::string fold_aggressive(std::string_view utf8);

/// "Mount Athos" -> "mount-athos".
std::string slugify(std::string_view utf8);

/// Percent-encodes every byte outside the RFC 3986 unreserved set and `keep`.
std::string percent_encode(std::string_view raw, std::string_view keep = {});

std::string sha256_hex(std::string_view data);

/// Case-folded word tokens; any run of letters/digits (non-ASCII bytes count
/// as letters) is one token.
std::vector<std::string> tokenize(std::string_view utf8);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace scriptorium::text
