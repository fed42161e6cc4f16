#include "fridgr/language.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "fridgr/error.hpp"

namespace fridgr {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    for (auto& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
}

/// Collapses internal whitespace to single spaces.
std::string squeeze(std::string_view s) {
    std::istringstream in{std::string(s)};
    std::string word, out;
    while (in >> word) {
        if (!out.empty()) out += ' ';
        out += word;
    }
    return out;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string_view::npos) comma = s.size();
        auto item = squeeze(lower(trim(s.substr(start, comma - start))));
        if (!item.empty()) out.push_back(std::move(item));
        start = comma + 1;
    }
    return out;
}

std::size_t word_count(std::string_view phrase) {
    return static_cast<std::size_t>(std::count(phrase.begin(), phrase.end(), ' ')) + 1;
}

std::string canonical_surface(std::string_view token) {
    std::string s(token);
    std::replace(s.begin(), s.end(), '-', ' ');
    return s;
}

bool valid_surface(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' '; });
}

std::optional<TokenKind> domain_kind(std::string_view token) {
    if (size_from_token(token)) return TokenKind::Size;
    if (freshness_from_token(token)) return TokenKind::Freshness;
    if (category_from_token(token)) return TokenKind::Category;
    if (class_from_token(token)) return TokenKind::Class;
    return std::nullopt;
}

bool is_nominal(TokenKind k) {
    return k == TokenKind::Category || k == TokenKind::Class || k == TokenKind::Subject;
}

// Words the question grammar reserves; the lexicon may not reuse them.
constexpr std::array<std::string_view, 8> kReservedWords = {"how", "many", "are", "is",
                                                            "there", "do", "have", "any"};

}  // namespace

// ---------------------------------------------------------------------------------------
// Lexicon

Lexicon Lexicon::parse(std::string_view source) {
    Lexicon lex;
    std::istringstream in{std::string(source)};
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::pair<std::string, std::string>> plural_records;
    std::vector<std::size_t> plural_lines;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        const auto space = line.find(' ');
        const auto colon = line.find(':');
        const std::string keyword = lower(line.substr(0, std::min(space, colon)));

        if (keyword == "stopwords") {
            if (colon == std::string::npos) throw TemplateSyntaxError(line_no, "expected 'stopwords: ...'");
            for (auto& w : split_list(std::string_view(line).substr(colon + 1))) {
                if (w.find(' ') != std::string::npos) throw TemplateSyntaxError(line_no, "stopwords are single words");
                lex.stopwords_.insert(w);
            }
        } else if (keyword == "subject") {
            if (space == std::string::npos) throw TemplateSyntaxError(line_no, "expected 'subject <token>'");
            auto token = lower(trim(std::string_view(line).substr(space + 1)));
            if (token.empty() || token.find(' ') != std::string::npos) {
                throw TemplateSyntaxError(line_no, "subject token must be one word");
            }
            if (domain_kind(token)) throw TemplateSyntaxError(line_no, "subject '" + token + "' is a property token");
            if (lex.kinds_.count(token)) throw TemplateSyntaxError(line_no, "duplicate subject '" + token + "'");
            lex.kinds_[token] = TokenKind::Subject;
            lex.subjects_.push_back(token);
        } else if (keyword == "canon") {
            if (space == std::string::npos || colon == std::string::npos || colon < space) {
                throw TemplateSyntaxError(line_no, "expected 'canon <token>: <surface>, ...'");
            }
            auto token = lower(trim(std::string_view(line).substr(space + 1, colon - space - 1)));
            std::optional<TokenKind> kind = domain_kind(token);
            if (!kind) {
                auto it = lex.kinds_.find(token);
                if (it == lex.kinds_.end()) {
                    throw TemplateSyntaxError(line_no, "unknown canonical token '" + token + "'");
                }
                kind = it->second;
            }
            lex.kinds_[token] = *kind;
            auto& list = lex.synonyms_[token];
            if (!list.empty()) throw TemplateSyntaxError(line_no, "duplicate canon record for '" + token + "'");
            list.push_back(canonical_surface(token));
            for (auto& s : split_list(std::string_view(line).substr(colon + 1))) {
                if (!valid_surface(s)) throw TemplateSyntaxError(line_no, "invalid surface '" + s + "'");
                if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
            }
        } else if (keyword == "plural") {
            if (space == std::string::npos || colon == std::string::npos || colon < space) {
                throw TemplateSyntaxError(line_no, "expected 'plural <surface>: <form>'");
            }
            auto surface = squeeze(lower(trim(std::string_view(line).substr(space + 1, colon - space - 1))));
            auto form = squeeze(lower(trim(std::string_view(line).substr(colon + 1))));
            if (!valid_surface(surface) || !valid_surface(form)) {
                throw TemplateSyntaxError(line_no, "invalid plural record");
            }
            plural_records.emplace_back(std::move(surface), std::move(form));
            plural_lines.push_back(line_no);
        } else {
            throw TemplateSyntaxError(line_no, "unknown record '" + keyword + "'");
        }
    }

    // Index every surface phrase, then attach plurals to known surfaces only.
    for (const auto& [token, list] : lex.synonyms_) {
        for (const auto& s : list) {
            auto [it, inserted] = lex.phrase_index_.emplace(s, token);
            if (!inserted && it->second != token) {
                throw TemplateSyntaxError(0, "surface '" + s + "' maps to both '" + it->second + "' and '" + token + "'");
            }
            lex.max_phrase_words_ = std::max(lex.max_phrase_words_, word_count(s));
        }
    }
    for (std::size_t i = 0; i < plural_records.size(); ++i) {
        const auto& [surface, form] = plural_records[i];
        auto it = lex.phrase_index_.find(surface);
        if (it == lex.phrase_index_.end()) {
            throw TemplateSyntaxError(plural_lines[i], "plural for unknown surface '" + surface + "'");
        }
        auto [pit, inserted] = lex.phrase_index_.emplace(form, it->second);
        if (!inserted && pit->second != it->second) {
            throw TemplateSyntaxError(plural_lines[i], "plural '" + form + "' is ambiguous");
        }
        lex.plurals_[surface] = form;
        lex.max_phrase_words_ = std::max(lex.max_phrase_words_, word_count(form));
    }

    for (const auto& [phrase, token] : lex.phrase_index_) {
        std::istringstream words(phrase);
        std::string w;
        while (words >> w) {
            if (std::find(kReservedWords.begin(), kReservedWords.end(), w) != kReservedWords.end()) {
                throw TemplateSyntaxError(0, "surface '" + phrase + "' uses reserved word '" + w + "'");
            }
            if (lex.stopwords_.count(w)) {
                throw TemplateSyntaxError(0, "surface '" + phrase + "' contains stopword '" + w + "'");
            }
        }
    }
    for (const auto& w : lex.stopwords_) {
        if (std::find(kReservedWords.begin(), kReservedWords.end(), w) != kReservedWords.end()) {
            throw TemplateSyntaxError(0, "reserved word '" + w + "' cannot be a stopword");
        }
    }

    // Every property token needs surfaces; every nominal surface needs a plural.
    auto require_token = [&](std::string_view token) {
        if (!lex.synonyms_.count(token)) {
            lex.kinds_[std::string(token)] = *domain_kind(token);
            lex.synonyms_[std::string(token)].push_back(canonical_surface(token));
            lex.phrase_index_.emplace(canonical_surface(token), std::string(token));
            lex.max_phrase_words_ = std::max(lex.max_phrase_words_, word_count(canonical_surface(token)));
        }
    };
    for (auto s : kAllSizes) require_token(to_token(s));
    for (auto f : kAllFreshness) require_token(to_token(f));
    for (auto c : kAllCategories) require_token(to_token(c));
    for (auto c : kAllClasses) require_token(to_token(c));
    for (const auto& subj : lex.subjects_) {
        if (!lex.synonyms_.count(subj)) {
            lex.synonyms_[subj].push_back(subj);
            lex.phrase_index_.emplace(subj, subj);
        }
    }
    for (const auto& [token, list] : lex.synonyms_) {
        if (!is_nominal(lex.kinds_.at(token))) continue;
        for (const auto& s : list) {
            if (!lex.plurals_.count(s)) {
                throw TemplateSyntaxError(0, "missing plural for '" + s + "'");
            }
        }
    }
    return lex;
}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = Lexicon::parse(builtin_lexicon_text());
    return lex;
}

const std::vector<std::string>& Lexicon::surfaces(std::string_view canonical) const {
    auto it = synonyms_.find(canonical);
    if (it == synonyms_.end()) {
        throw Error(Errc::InvalidArgument, "no surfaces for token '" + std::string(canonical) + "'");
    }
    return it->second;
}

const std::string& Lexicon::plural(const std::string& surface) const {
    auto it = plurals_.find(surface);
    return it == plurals_.end() ? surface : it->second;
}

std::optional<TokenKind> Lexicon::kind_of(std::string_view canonical) const {
    auto it = kinds_.find(canonical);
    if (it == kinds_.end()) return std::nullopt;
    return it->second;
}

const std::string* Lexicon::canonical_for(std::string_view phrase) const {
    auto it = phrase_index_.find(std::string(phrase));
    return it == phrase_index_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------------------
// Templates

std::string_view to_token(FormLength l) noexcept { return l == FormLength::Short ? "short" : "long"; }

std::optional<FormLength> form_length_from_token(std::string_view token) noexcept {
    if (token == "long") return FormLength::Long;
    if (token == "short") return FormLength::Short;
    return std::nullopt;
}

bool TemplateForm::has_slot(Slot s) const noexcept {
    return std::any_of(pieces.begin(), pieces.end(),
                       [s](const Piece& p) { return p.is_slot && p.slot == s; });
}

namespace {

TemplateForm parse_form(std::string text, std::size_t line_no) {
    TemplateForm form;
    form.text = text;
    std::istringstream words(text);
    std::string w;
    int last_rank = -1;
    while (words >> w) {
        TemplateForm::Piece piece;
        if (w.front() == '{') {
            if (w.back() != '}') throw TemplateSyntaxError(line_no, "unterminated slot '" + w + "'");
            const auto name = w.substr(1, w.size() - 2);
            piece.is_slot = true;
            if (name == "Z") {
                piece.slot = Slot::Z;
            } else if (name == "M") {
                piece.slot = Slot::M;
            } else if (name == "C") {
                piece.slot = Slot::C;
            } else if (name == "S") {
                piece.slot = Slot::S;
            } else if (name == "SUBJ") {
                piece.slot = Slot::Subject;
            } else {
                throw TemplateSyntaxError(line_no, "unknown slot '" + w + "'");
            }
            if (form.has_slot(piece.slot)) throw TemplateSyntaxError(line_no, "slot '" + w + "' repeated");
            if (piece.slot != Slot::Subject) {
                const int rank = static_cast<int>(piece.slot);
                if (rank < last_rank) throw TemplateSyntaxError(line_no, "slots must appear in Z, M, C, S order");
                last_rank = rank;
            }
        } else {
            if (w.find_first_of("{}") != std::string::npos) {
                throw TemplateSyntaxError(line_no, "stray brace in '" + w + "'");
            }
            piece.literal = lower(w);
        }
        form.pieces.push_back(std::move(piece));
    }
    if (!form.has_slot(Slot::C) && !form.has_slot(Slot::S) && !form.has_slot(Slot::Subject)) {
        throw TemplateSyntaxError(line_no, "form has no nominal slot ({C}, {S} or {SUBJ})");
    }
    return form;
}

void validate_template(const QuestionTemplate& t, std::size_t line_no) {
    if (t.forms.empty()) throw TemplateSyntaxError(line_no, "template '" + t.id + "' has no forms");
    for (auto slot : {Slot::Z, Slot::M, Slot::C, Slot::S}) {
        const bool present = std::any_of(t.forms.begin(), t.forms.end(),
                                         [slot](const TemplateForm& f) { return f.has_slot(slot); });
        if (!present) {
            throw TemplateSyntaxError(line_no, "template '" + t.id + "' never uses a maskable slot");
        }
    }
}

}  // namespace

TemplateSet TemplateSet::parse(std::string_view source) {
    TemplateSet set;
    std::istringstream in{std::string(source)};
    std::string raw;
    std::size_t line_no = 0;
    std::size_t header_line = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        if (line[0] == '"') {
            if (set.templates_.empty()) throw TemplateSyntaxError(line_no, "form before any template header");
            const auto close = line.find('"', 1);
            if (close == std::string::npos) throw TemplateSyntaxError(line_no, "unterminated form string");
            TemplateForm form = parse_form(line.substr(1, close - 1), line_no);
            std::istringstream tags(line.substr(close + 1));
            std::string tag;
            bool have_length = false;
            while (tags >> tag) {
                tag = lower(tag);
                if (auto len = form_length_from_token(tag)) {
                    form.length = *len;
                    have_length = true;
                } else if (tag == "plural") {
                    form.number = GrammaticalNumber::Plural;
                } else if (tag == "singular") {
                    form.number = GrammaticalNumber::Singular;
                } else {
                    throw TemplateSyntaxError(line_no, "unknown form tag '" + tag + "'");
                }
            }
            if (!have_length) throw TemplateSyntaxError(line_no, "form must be tagged long or short");
            set.templates_.back().forms.push_back(std::move(form));
            continue;
        }

        std::istringstream words(line);
        std::string keyword, id, head, extra;
        words >> keyword >> id >> head;
        if (lower(keyword) != "template" || id.empty() || head.empty() || (words >> extra)) {
            throw TemplateSyntaxError(line_no, "expected 'template <id> <exist|count>'");
        }
        head = lower(head);
        QuestionTemplate t;
        t.id = id;
        if (head == "exist") {
            t.head = Head::Exist;
        } else if (head == "count") {
            t.head = Head::Count;
        } else {
            throw TemplateSyntaxError(line_no, "unknown head '" + head + "'");
        }
        if (set.find(id)) throw Error(Errc::DuplicateTemplateId, "duplicate template id '" + id + "'");
        if (!set.templates_.empty()) validate_template(set.templates_.back(), header_line);
        header_line = line_no;
        set.templates_.push_back(std::move(t));
    }
    if (!set.templates_.empty()) validate_template(set.templates_.back(), header_line);
    return set;
}

const TemplateSet& TemplateSet::builtin() {
    static const TemplateSet set = TemplateSet::parse(builtin_templates_text());
    return set;
}

const QuestionTemplate* TemplateSet::find(std::string_view id) const noexcept {
    for (const auto& t : templates_) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

TemplateSet TemplateSet::only(Head head) const {
    TemplateSet out;
    for (const auto& t : templates_) {
        if (t.head == head) out.templates_.push_back(t);
    }
    return out;
}

}  // namespace fridgr
