#include "fridgr/question_generator.hpp"

#include <cmath>
#include <unordered_set>

#include "fridgr/error.hpp"

namespace fridgr {

namespace {

constexpr int kDuplicateRetries = 16;
constexpr int kStrictMaskRetries = 8;
constexpr int kFallbackMaskRetries = 64;

template <typename T>
std::vector<std::optional<T>> options_for(bool enabled, const auto& values) {
    if (!enabled) return {std::nullopt};
    std::vector<std::optional<T>> out;
    for (auto v : values) out.emplace_back(v);
    return out;
}

const std::string& choose_surface(const std::vector<std::string>& surfaces, double synonym_probability,
                                  Rng& rng) {
    if (surfaces.size() > 1 && rng.bernoulli(synonym_probability)) {
        return surfaces[1 + rng.below(surfaces.size() - 1)];
    }
    return surfaces.front();
}

std::string nominal(std::string_view token, bool plural, const Lexicon& lexicon, double p, Rng& rng) {
    const auto& surface = choose_surface(lexicon.surfaces(token), p, rng);
    return plural ? lexicon.plural(surface) : surface;
}

std::string subject_nominal(bool plural, const Lexicon& lexicon, double p, Rng& rng) {
    const auto& subjects = lexicon.subjects();
    if (subjects.empty()) throw Error(Errc::InvalidArgument, "lexicon declares no subjects");
    const auto& subject = choose_surface(subjects, p, rng);
    const auto& surface = lexicon.surfaces(subject).front();
    return plural ? lexicon.plural(surface) : surface;
}

bool form_supports(const TemplateForm& form, const VariableMask& m) {
    if (m.size && !form.has_slot(Slot::Z)) return false;
    if (m.freshness && !form.has_slot(Slot::M)) return false;
    if (m.category && !form.has_slot(Slot::C)) return false;
    if (m.object_class && !form.has_slot(Slot::S)) return false;
    if (m.needs_subject() && !form.has_slot(Slot::Subject) && !form.has_slot(Slot::S)) return false;
    return true;
}

std::size_t choose_form(const QuestionTemplate& tmpl, FormLength length, Rng& rng) {
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < tmpl.forms.size(); ++i) {
        if (tmpl.forms[i].length == length) group.push_back(i);
    }
    if (group.empty()) {
        for (std::size_t i = 0; i < tmpl.forms.size(); ++i) group.push_back(i);
    }
    return group[rng.below(group.size())];
}

}  // namespace

std::string VariableMask::to_string() const {
    std::string s = "----";
    if (size) s[0] = 'Z';
    if (freshness) s[1] = 'M';
    if (category) s[2] = 'C';
    if (object_class) s[3] = 'S';
    return s;
}

std::optional<VariableMask> VariableMask::parse(std::string_view text) noexcept {
    if (text.size() != 4) return std::nullopt;
    constexpr std::string_view letters = "ZMCS";
    VariableMask m;
    bool* fields[4] = {&m.size, &m.freshness, &m.category, &m.object_class};
    for (std::size_t i = 0; i < 4; ++i) {
        if (text[i] == letters[i]) {
            *fields[i] = true;
        } else if (text[i] != '-') {
            return std::nullopt;
        }
    }
    return m;
}

void DistributionProfile::validate() const {
    auto is_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!is_prob(short_form_probability) || !is_prob(synonym_probability) ||
        !is_prob(target_positive_fraction)) {
        throw Error(Errc::InvalidConfig, "profile '" + name + "' has a probability outside [0, 1]");
    }
    double total = 0.0;
    for (double w : mask_weights) {
        if (w < 0.0) throw Error(Errc::InvalidConfig, "profile '" + name + "' has a negative mask weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw Error(Errc::InvalidConfig, "profile '" + name + "' mask weights do not sum to 1");
    }
}

DistributionProfile DistributionProfile::original() {
    DistributionProfile p;
    p.name = "original";
    p.short_form_probability = 0.0;
    //              ----  ---S  --C-  --CS  -M--  -M-S  -MC-  -MCS
    p.mask_weights = {0.00, 0.08, 0.06, 0.04, 0.04, 0.10, 0.07, 0.04,
    //              Z---  Z--S  Z-C-  Z-CS  ZM--  ZM-S  ZMC-  ZMCS
                      0.04, 0.10, 0.07, 0.04, 0.05, 0.14, 0.08, 0.05};
    p.synonym_probability = 0.3;
    p.target_positive_fraction = 0.5;
    return p;
}

DistributionProfile DistributionProfile::modified() {
    DistributionProfile p;
    p.name = "modified";
    p.short_form_probability = 0.65;
    //              ----  ---S  --C-  --CS  -M--  -M-S  -MC-  -MCS
    p.mask_weights = {0.02, 0.35, 0.20, 0.01, 0.08, 0.06, 0.03, 0.01,
    //              Z---  Z--S  Z-C-  Z-CS  ZM--  ZM-S  ZMC-  ZMCS
                      0.05, 0.06, 0.03, 0.01, 0.02, 0.04, 0.02, 0.01};
    p.synonym_probability = 0.3;
    p.target_positive_fraction = 0.5;
    return p;
}

DistributionProfile DistributionProfile::by_name(std::string_view name) {
    if (name == "original") return original();
    if (name == "modified") return modified();
    throw Error(Errc::InvalidArgument, "unknown profile '" + std::string(name) + "'");
}

VariableMask sample_mask(const DistributionProfile& profile, Rng& rng) {
    return VariableMask::from_index(static_cast<int>(rng.weighted(profile.mask_weights)));
}

TautologyDecision avoid_tautology(const QuestionValues& values, Rng& rng) {
    if (!values.category || !values.object_class) return {TautologyOutcome::Accept, values};
    TautologyDecision d{TautologyOutcome::Repair, values};
    if (category_of(*values.object_class) != *values.category) {
        std::vector<ObjectClass> inside;
        for (auto c : kAllClasses) {
            if (category_of(c) != *values.category) continue;
            // Keep a freshness question answerable by staying on perishable classes.
            if (values.freshness && !is_perishable(c)) continue;
            inside.push_back(c);
        }
        if (inside.empty()) {
            for (auto c : kAllClasses) {
                if (category_of(c) == *values.category) inside.push_back(c);
            }
        }
        d.values.object_class = inside[rng.below(inside.size())];
    }
    d.values.category.reset();
    return d;
}

std::string render_question(const TemplateForm& form, const QuestionValues& values,
                            const Lexicon& lexicon, double p, Rng& rng) {
    const bool plural = form.number == GrammaticalNumber::Plural;
    const bool needs_subject = !values.category && !values.object_class;
    const bool subject_in_s = needs_subject && !form.has_slot(Slot::Subject);
    std::string out;
    auto emit = [&out](const std::string& word) {
        if (word.empty()) return;
        if (!out.empty()) out += ' ';
        out += word;
    };
    for (const auto& piece : form.pieces) {
        if (!piece.is_slot) {
            emit(piece.literal);
            continue;
        }
        switch (piece.slot) {
            case Slot::Z:
                if (values.size) emit(choose_surface(lexicon.surfaces(to_token(*values.size)), p, rng));
                break;
            case Slot::M:
                if (values.freshness) {
                    emit(choose_surface(lexicon.surfaces(to_token(*values.freshness)), p, rng));
                }
                break;
            case Slot::C:
                if (values.category) emit(nominal(to_token(*values.category), plural, lexicon, p, rng));
                break;
            case Slot::S:
                if (values.object_class) {
                    emit(nominal(to_token(*values.object_class), plural, lexicon, p, rng));
                } else if (subject_in_s) {
                    emit(subject_nominal(plural, lexicon, p, rng));
                }
                break;
            case Slot::Subject:
                if (needs_subject) emit(subject_nominal(plural, lexicon, p, rng));
                break;
        }
    }
    return out;
}

GeneratedQA instantiate(const QuestionTemplate& tmpl, const VariableMask& mask, const Scene& scene,
                        const Lexicon& lexicon, const DistributionProfile& profile, Rng& rng,
                        const InstantiateOptions& options) {
    if (tmpl.forms.empty()) throw Error(Errc::UnsatisfiableMask, "template '" + tmpl.id + "' has no forms");

    VariableMask effective = mask;
    if (effective.category && effective.object_class) effective.category = false;

    const FormLength length = options.form_length.value_or(
        rng.bernoulli(profile.short_form_probability) ? FormLength::Short : FormLength::Long);
    const std::size_t form_index = choose_form(tmpl, length, rng);
    const TemplateForm& form = tmpl.forms[form_index];
    if (!form_supports(form, effective)) {
        throw Error(Errc::UnsatisfiableMask,
                    "form \"" + form.text + "\" cannot express mask " + mask.to_string());
    }

    // Candidate values for the mask. Freshness is only asked about scopes that can hold
    // perishables: perishable classes, categories containing them, or generic subjects.
    const auto sizes = options_for<Size>(mask.size, kAllSizes);
    const auto fresh = options_for<Freshness>(mask.freshness, kAllFreshness);
    std::vector<std::optional<Category>> categories{std::nullopt};
    std::vector<std::optional<ObjectClass>> classes{std::nullopt};
    if (mask.object_class) {
        classes.clear();
        for (auto c : kAllClasses) {
            if (!mask.freshness || is_perishable(c)) classes.emplace_back(c);
        }
    } else if (mask.category) {
        categories.clear();
        for (auto c : kAllCategories) {
            if (!mask.freshness || category_has_perishables(c)) categories.emplace_back(c);
        }
    }

    std::vector<QuestionValues> positive, negative;
    for (const auto& z : sizes) {
        for (const auto& m : fresh) {
            for (const auto& c : categories) {
                for (const auto& s : classes) {
                    QuestionValues v{z, m, c, s};
                    if (mask.category && mask.object_class) {
                        v.category = category_of(*s);
                        v = avoid_tautology(v, rng).values;
                    }
                    const auto filters = FilterSet::make(v.size, v.freshness, v.category, v.object_class);
                    (count_matching(scene, filters) > 0 ? positive : negative).push_back(v);
                }
            }
        }
    }

    const bool want_positive = options.want_positive.value_or(rng.bernoulli(profile.target_positive_fraction));
    const std::vector<QuestionValues>* pool = want_positive ? &positive : &negative;
    if (pool->empty()) {
        if (!options.allow_polarity_fallback) {
            throw Error(Errc::UnsatisfiableMask, "no " + std::string(want_positive ? "positive" : "negative") +
                                                     " values for mask " + mask.to_string());
        }
        pool = want_positive ? &negative : &positive;
    }
    if (pool->empty()) throw Error(Errc::UnsatisfiableMask, "mask " + mask.to_string() + " admits no values");
    const QuestionValues values = (*pool)[rng.below(pool->size())];

    GeneratedQA qa;
    qa.question_text = render_question(form, values, lexicon, profile.synonym_probability, rng);
    qa.program.head = tmpl.head;
    qa.program.filters = FilterSet::make(values.size, values.freshness, values.category, values.object_class);
    qa.answer = evaluate(qa.program, scene);
    qa.template_id = tmpl.id;
    qa.form_index = static_cast<int>(form_index);
    qa.form_length = form.length;
    qa.mask = effective;
    qa.profile_name = profile.name;
    qa.scene_id = scene.scene_id();
    return qa;
}

std::vector<GeneratedQA> generate_qa_set(const Scene& scene, std::size_t n, const TemplateSet& templates,
                                         const Lexicon& lexicon, const DistributionProfile& profile,
                                         Rng& rng) {
    if (n == 0) throw Error(Errc::InvalidArgument, "n must be > 0");
    if (templates.empty()) throw Error(Errc::InvalidArgument, "no question templates loaded");
    profile.validate();

    const auto& all = templates.templates();
    std::vector<GeneratedQA> out;
    out.reserve(n);
    std::unordered_set<std::string> seen;

    for (std::size_t i = 0; i < n; ++i) {
        // Polarity and form length are fixed per slot so that duplicate resampling does not
        // skew either statistic.
        InstantiateOptions opts;
        opts.want_positive = rng.bernoulli(profile.target_positive_fraction);
        opts.form_length = rng.bernoulli(profile.short_form_probability) ? FormLength::Short : FormLength::Long;

        std::optional<GeneratedQA> chosen;
        for (int attempt = 0; attempt < kDuplicateRetries; ++attempt) {
            const auto& tmpl = all[rng.below(all.size())];
            std::optional<GeneratedQA> qa;
            opts.allow_polarity_fallback = false;
            for (int t = 0; t < kStrictMaskRetries && !qa; ++t) {
                try {
                    qa = instantiate(tmpl, sample_mask(profile, rng), scene, lexicon, profile, rng, opts);
                } catch (const Error& e) {
                    if (e.code() != Errc::UnsatisfiableMask) throw;
                }
            }
            opts.allow_polarity_fallback = true;
            for (int t = 0; t < kFallbackMaskRetries && !qa; ++t) {
                try {
                    qa = instantiate(tmpl, sample_mask(profile, rng), scene, lexicon, profile, rng, opts);
                } catch (const Error& e) {
                    if (e.code() != Errc::UnsatisfiableMask) throw;
                }
            }
            if (!qa) throw Error(Errc::UnsatisfiableMask, "template '" + tmpl.id + "' cannot produce a question");
            const bool fresh_text = !seen.count(qa->question_text);
            if (fresh_text || attempt + 1 == kDuplicateRetries) {
                chosen = std::move(qa);
                break;
            }
        }
        seen.insert(chosen->question_text);
        out.push_back(std::move(*chosen));
    }
    return out;
}

}  // namespace fridgr
