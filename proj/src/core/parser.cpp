#include "fridgr/parser.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "fridgr/error.hpp"

namespace fridgr {

namespace {

constexpr std::array<std::string_view, 8> kKeywords = {"how", "many", "are", "is",
                                                      "there", "do", "have", "any"};

bool is_keyword(std::string_view w) {
    return std::find(kKeywords.begin(), kKeywords.end(), w) != kKeywords.end();
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string cur;
    for (char ch : text) {
        char c = ch;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            cur += c;
        } else if (!cur.empty()) {
            words.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

struct Rule {
    std::vector<std::string_view> prefix;
    bool optional_any = false;
    std::vector<std::string_view> suffix;
    std::vector<std::string_view> optional_suffix;
    Head head = Head::Exist;
    GrammarMode min_mode = GrammarMode::Original;
};

const std::array<Rule, 8>& rules() {
    static const std::array<Rule, 8> r = {{
        {{"how", "many"}, false, {"are", "there"}, {}, Head::Count, GrammarMode::Original},
        {{"how", "many"}, false, {"do", "have"}, {}, Head::Count, GrammarMode::Original},
        {{"are", "there"}, true, {}, {"there"}, Head::Exist, GrammarMode::Original},
        {{"is", "there"}, true, {}, {}, Head::Exist, GrammarMode::Original},
        {{"do", "have"}, true, {}, {}, Head::Exist, GrammarMode::Original},
        {{"how", "many"}, false, {}, {}, Head::Count, GrammarMode::Extended},
        {{"any"}, false, {}, {}, Head::Exist, GrammarMode::Extended},
        {{}, false, {}, {}, Head::Exist, GrammarMode::Extended},
    }};
    return r;
}

bool starts_with(const TokenStream& t, std::size_t b, std::size_t e, const std::vector<std::string_view>& p) {
    if (e - b < p.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (t[b + i].text != p[i]) return false;
    }
    return true;
}

bool ends_with(const TokenStream& t, std::size_t b, std::size_t e, const std::vector<std::string_view>& s) {
    if (e - b < s.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (t[e - s.size() + i].text != s[i]) return false;
    }
    return true;
}

/// Returns the [begin, end) range of the noun phrase when the rule matches.
std::optional<std::pair<std::size_t, std::size_t>> match(const Rule& rule, const TokenStream& t) {
    std::size_t b = 0, e = t.size();
    if (!starts_with(t, b, e, rule.prefix)) return std::nullopt;
    b += rule.prefix.size();
    if (!ends_with(t, b, e, rule.suffix)) return std::nullopt;
    e -= rule.suffix.size();
    if (rule.optional_any && b < e && t[b].text == "any") ++b;
    if (!rule.optional_suffix.empty() && e - b > rule.optional_suffix.size() &&
        ends_with(t, b, e, rule.optional_suffix)) {
        e -= rule.optional_suffix.size();
    }
    if (b >= e) return std::nullopt;
    for (std::size_t i = b; i < e; ++i) {
        if (is_keyword(t[i].text)) return std::nullopt;
    }
    return std::make_pair(b, e);
}

template <typename T>
void bind(std::optional<T>& slot, T value, const std::string& token) {
    if (slot && *slot != value) {
        throw ParseError(Errc::InconsistentFilters, "conflicting values for the same property", token);
    }
    slot = value;
}

}  // namespace

TokenStream normalize(std::string_view text, const Lexicon& lexicon) {
    // Stopwords go first so that phrases match across them ("milk the pack") and the
    // output renormalizes to itself.
    auto words = split_words(text);
    std::erase_if(words, [&](const std::string& w) { return !is_keyword(w) && lexicon.is_stopword(w); });
    TokenStream out;
    std::size_t i = 0;
    while (i < words.size()) {
        bool matched = false;
        const std::size_t longest = std::min(lexicon.max_phrase_words(), words.size() - i);
        for (std::size_t len = longest; len >= 1 && !matched; --len) {
            std::string phrase = words[i];
            for (std::size_t k = 1; k < len; ++k) (phrase += ' ') += words[i + k];
            if (const auto* canon = lexicon.canonical_for(phrase)) {
                out.push_back(Token{*canon, true});
                i += len;
                matched = true;
            }
        }
        if (matched) continue;
        const auto& w = words[i];
        out.push_back(Token{w, is_keyword(w)});
        ++i;
    }
    return out;
}

std::string join(const TokenStream& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t.text;
    }
    return out;
}

std::string_view to_token(GrammarMode m) noexcept { return m == GrammarMode::Original ? "original" : "extended"; }

GrammarMode grammar_mode_from_token(std::string_view token) {
    if (token == "original") return GrammarMode::Original;
    if (token == "extended") return GrammarMode::Extended;
    throw Error(Errc::InvalidArgument, "unknown grammar mode '" + std::string(token) + "'");
}

QueryProgram parse(const TokenStream& tokens, GrammarMode mode, const Lexicon& lexicon) {
    if (tokens.empty()) throw ParseError(Errc::EmptyQuery, "empty question");
    for (const auto& t : tokens) {
        if (!t.known) throw ParseError(Errc::UnknownToken, "unknown word '" + t.text + "'", t.text);
    }

    const Rule* rule = nullptr;
    std::pair<std::size_t, std::size_t> np;
    bool needs_extended = false;
    for (const auto& r : rules()) {
        if (auto m = match(r, tokens)) {
            if (r.min_mode == GrammarMode::Extended && mode == GrammarMode::Original) {
                needs_extended = true;
                break;
            }
            rule = &r;
            np = *m;
            break;
        }
    }
    if (!rule) {
        throw ParseError(Errc::OutOfGrammar, needs_extended
                                                 ? "short form is not accepted by the original grammar"
                                                 : "question does not match any construction");
    }

    std::optional<Size> size;
    std::optional<Freshness> freshness;
    std::optional<Category> category;
    std::optional<ObjectClass> cls;
    for (std::size_t i = np.first; i < np.second; ++i) {
        const auto& text = tokens[i].text;
        const auto kind = lexicon.kind_of(text);
        if (!kind) throw ParseError(Errc::UnknownToken, "unknown word '" + text + "'", text);
        switch (*kind) {
            case TokenKind::Size:
                bind(size, *size_from_token(text), text);
                break;
            case TokenKind::Freshness:
                bind(freshness, *freshness_from_token(text), text);
                break;
            case TokenKind::Category:
                bind(category, *category_from_token(text), text);
                break;
            case TokenKind::Class:
                bind(cls, *class_from_token(text), text);
                break;
            case TokenKind::Subject:
                break;
        }
    }
    if (category && cls) {
        if (category_of(*cls) != *category) {
            throw ParseError(Errc::InconsistentFilters,
                             "'" + std::string(to_token(*cls)) + "' is not a " + std::string(to_token(*category)),
                             std::string(to_token(*category)));
        }
        category.reset();  // the class already implies it
    }
    QueryProgram p;
    p.head = rule->head;
    p.filters = FilterSet::make(size, freshness, category, cls);
    return p;
}

QueryProgram parse_question(std::string_view text, GrammarMode mode, const Lexicon& lexicon) {
    return parse(normalize(text, lexicon), mode, lexicon);
}

}  // namespace fridgr
