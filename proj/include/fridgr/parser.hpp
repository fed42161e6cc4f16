#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fridgr/language.hpp"
#include "fridgr/query.hpp"

namespace fridgr {

struct Token {
    std::string text;  // canonical token, grammar keyword, or the raw word when unknown
    bool known = true;

    friend bool operator==(const Token&, const Token&) = default;
};

using TokenStream = std::vector<Token>;

/// Lowercases, turns every non-alphanumeric character into a word break, drops stopwords,
/// maps the longest matching surface phrase to its canonical token, keeps grammar keywords
/// and keeps anything else flagged unknown.
TokenStream normalize(std::string_view text, const Lexicon& lexicon);

/// Space-joined token texts.
std::string join(const TokenStream& tokens);

enum class GrammarMode : std::uint8_t { Original, Extended };

std::string_view to_token(GrammarMode m) noexcept;
/// "original" / "extended"; throws Error(InvalidArgument) otherwise.
GrammarMode grammar_mode_from_token(std::string_view token);

/// Rule-based parse into a query program. Rules are tried in a fixed order and the first
/// one that matches wins (NP is one or more property or subject tokens):
///
///   1. how many NP are there      COUNT  original
///   2. how many NP do have        COUNT  original
///   3. are there [any] NP [there] EXIST  original
///   4. is there [any] NP          EXIST  original
///   5. do have [any] NP           EXIST  original
///   6. how many NP                COUNT  extended
///   7. any NP                     EXIST  extended
///   8. NP                         EXIST  extended
///
/// Throws ParseError with kind EmptyQuery, UnknownToken, OutOfGrammar or
/// InconsistentFilters, checked in that order.
QueryProgram parse(const TokenStream& tokens, GrammarMode mode, const Lexicon& lexicon);

/// normalize + parse.
QueryProgram parse_question(std::string_view text, GrammarMode mode, const Lexicon& lexicon);

}  // namespace fridgr
