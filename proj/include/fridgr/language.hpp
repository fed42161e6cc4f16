#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fridgr/query.hpp"

namespace fridgr {

enum class TokenKind : std::uint8_t { Size, Freshness, Category, Class, Subject };

/// Surface vocabulary: synonyms, plural forms, generic subjects and stopwords.
///
/// Every canonical token owns an ordered list of surface phrases; the first entry is the
/// canonical spelling (the token with '-' read as a space) and is added automatically when
/// a "canon" record omits it. Plural forms are keyed by surface phrase and must exist for
/// every surface of a nominal token (class, category, subject).
class Lexicon {
public:
    /// Parses the lexicon text format (see data/lexicon.txt). Throws TemplateSyntaxError.
    static Lexicon parse(std::string_view source);
    /// The shipped default lexicon.
    static const Lexicon& builtin();

    const std::vector<std::string>& surfaces(std::string_view canonical) const;
    /// Plural of a surface phrase; the phrase itself when no plural is recorded.
    const std::string& plural(const std::string& surface) const;
    const std::vector<std::string>& subjects() const noexcept { return subjects_; }
    const std::set<std::string>& stopwords() const noexcept { return stopwords_; }
    bool is_stopword(std::string_view word) const { return stopwords_.count(std::string(word)) > 0; }

    std::optional<TokenKind> kind_of(std::string_view canonical) const;

    /// Canonical token for a surface phrase (singular or plural), if known.
    const std::string* canonical_for(std::string_view phrase) const;
    std::size_t max_phrase_words() const noexcept { return max_phrase_words_; }

private:
    std::map<std::string, std::vector<std::string>, std::less<>> synonyms_;
    std::map<std::string, TokenKind, std::less<>> kinds_;
    std::unordered_map<std::string, std::string> plurals_;
    std::vector<std::string> subjects_;
    std::set<std::string> stopwords_;
    std::unordered_map<std::string, std::string> phrase_index_;
    std::size_t max_phrase_words_ = 1;
};

enum class FormLength : std::uint8_t { Long, Short };
enum class GrammaticalNumber : std::uint8_t { Plural, Singular };

std::string_view to_token(FormLength l) noexcept;
std::optional<FormLength> form_length_from_token(std::string_view token) noexcept;

enum class Slot : std::uint8_t { Z, M, C, S, Subject };

/// One surface pattern, e.g. "do i have {Z} {M} {C} {S}".
struct TemplateForm {
    struct Piece {
        bool is_slot = false;
        Slot slot = Slot::Z;
        std::string literal;
    };

    std::string text;
    FormLength length = FormLength::Long;
    GrammaticalNumber number = GrammaticalNumber::Plural;
    std::vector<Piece> pieces;

    bool has_slot(Slot s) const noexcept;
};

struct QuestionTemplate {
    std::string id;
    Head head = Head::Exist;
    std::vector<TemplateForm> forms;
};

/// Templates in file order.
class TemplateSet {
public:
    /// Parses the template text format (see data/templates.txt). Throws TemplateSyntaxError
    /// or Error(DuplicateTemplateId).
    static TemplateSet parse(std::string_view source);
    static const TemplateSet& builtin();

    const std::vector<QuestionTemplate>& templates() const noexcept { return templates_; }
    bool empty() const noexcept { return templates_.empty(); }
    const QuestionTemplate* find(std::string_view id) const noexcept;

    /// Subset with the given head, preserving order.
    TemplateSet only(Head head) const;

private:
    std::vector<QuestionTemplate> templates_;
};

/// Shipped data files, embedded at build time.
std::string_view builtin_templates_text() noexcept;
std::string_view builtin_lexicon_text() noexcept;

}  // namespace fridgr
