#pragma once

#include "km/formula.hpp"
#include "km/sequent.hpp"

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace km {

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

/// Byte offsets into the parsed text, start <= end <= length.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, const std::string& message);

    [[nodiscard]] SourceSpan span() const { return span_; }
    [[nodiscard]] const std::string& message() const { return message_; }

private:
    SourceSpan span_;
    std::string message_;
};

// Text grammar, loosest binding first:
//   formula := disj ("->" formula)?            right-associative
//   disj    := conj ("|" conj)*                left-associative
//   conj    := unary ("&" unary)*              left-associative
//   unary   := ("box" | "[]" | "~") unary | primary
//   primary := ident | "false" | "true" | "(" formula ")"
// Unicode spellings (⊥ ⊤ □ ∧ ∨ → ¬ ⇒) and "#" for bottom are accepted too.
// "~f" and "¬f" mean f -> false; "true" means false -> false.

Formula parse_formula(std::string_view text);

/// "G => D" (also "⇒" or "|-"); each side a comma-separated, possibly empty list.
Sequent parse_sequent(std::string_view text);

/// Comma-separated, possibly empty list of formulas.
std::vector<Formula> parse_formula_list(std::string_view text);

/// ASCII output with the fewest parentheses the grammar allows.
/// Output longer than max_chars is cut and marked with " ...". Formulas are
/// printed as trees, so heavily shared ones can be exponentially long.
std::string print_formula(Formula f, std::size_t max_chars = kUnlimited);
std::string print_multiset(const FMultiset& m, std::size_t max_chars = kUnlimited);
std::string print_sequent(const Sequent& s, std::size_t max_chars = kUnlimited);

} // namespace km
