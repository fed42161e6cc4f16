#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fridgr/language.hpp"
#include "fridgr/query.hpp"
#include "fridgr/rng.hpp"

namespace fridgr {

/// Which template variables a question fills: size, freshness, category, class.
struct VariableMask {
    bool size = false;
    bool freshness = false;
    bool category = false;
    bool object_class = false;

    /// Bit order Z=8, M=4, C=2, S=1, so "ZMCS" is 15 and "----" is 0.
    int index() const noexcept {
        return (size ? 8 : 0) | (freshness ? 4 : 0) | (category ? 2 : 0) | (object_class ? 1 : 0);
    }
    static VariableMask from_index(int index) noexcept {
        return {(index & 8) != 0, (index & 4) != 0, (index & 2) != 0, (index & 1) != 0};
    }
    /// Four characters, letter when on and '-' when off, e.g. "ZM-S".
    std::string to_string() const;
    static std::optional<VariableMask> parse(std::string_view text) noexcept;
    /// Neither category nor class is set, so a generic subject stands in for the nominal.
    bool needs_subject() const noexcept { return !category && !object_class; }

    friend bool operator==(const VariableMask&, const VariableMask&) = default;
};

inline constexpr std::size_t kMaskPatterns = 16;

/// Sampling configuration for one dataset language distribution.
struct DistributionProfile {
    std::string name;
    double short_form_probability = 0.0;
    std::array<double, kMaskPatterns> mask_weights{};  // indexed by VariableMask::index()
    double synonym_probability = 0.3;
    double target_positive_fraction = 0.5;

    /// Throws Error(InvalidConfig) unless weights are normalized and probabilities valid.
    void validate() const;

    /// Long forms only with multi-variable masks favoured.
    static DistributionProfile original();
    /// Short forms at 0.65 mass and masks skewed to single-variable questions.
    static DistributionProfile modified();
    /// "original" or "modified"; throws Error(InvalidArgument) otherwise.
    static DistributionProfile by_name(std::string_view name);
};

/// Concrete values for the enabled template variables.
struct QuestionValues {
    std::optional<Size> size;
    std::optional<Freshness> freshness;
    std::optional<Category> category;
    std::optional<ObjectClass> object_class;

    friend bool operator==(const QuestionValues&, const QuestionValues&) = default;
};

struct GeneratedQA {
    std::string question_text;
    QueryProgram program;
    Answer answer;
    std::string template_id;
    int form_index = 0;
    FormLength form_length = FormLength::Long;
    VariableMask mask;  // effective mask, after tautology repair
    std::string profile_name;
    std::int64_t scene_id = 0;

    friend bool operator==(const GeneratedQA&, const GeneratedQA&) = default;
};

VariableMask sample_mask(const DistributionProfile& profile, Rng& rng);

enum class TautologyOutcome : std::uint8_t { Accept, Repair };

struct TautologyDecision {
    TautologyOutcome outcome = TautologyOutcome::Accept;
    QuestionValues values;
};

/// A category paired with one of its own classes would name the same thing twice
/// ("fruit bananas"): the category is dropped. A cross-category pair is never kept either;
/// the class is redrawn inside the category and the category is then dropped.
TautologyDecision avoid_tautology(const QuestionValues& values, Rng& rng);

/// Surface text for the given values using one template form, without randomness beyond
/// synonym replacement (probability synonym_probability per content token).
std::string render_question(const TemplateForm& form, const QuestionValues& values,
                            const Lexicon& lexicon, double synonym_probability, Rng& rng);

struct InstantiateOptions {
    std::optional<bool> want_positive;      // drawn from the profile when absent
    std::optional<FormLength> form_length;  // drawn from the profile when absent
    /// When the requested polarity has no candidates: fall back to the other one (true)
    /// or throw Error(UnsatisfiableMask) (false).
    bool allow_polarity_fallback = true;
};

/// Builds one question from a template and a mask against a scene. Throws
/// Error(UnsatisfiableMask) when the chosen form lacks a needed slot or the mask admits
/// no values under the freshness-scope rule.
GeneratedQA instantiate(const QuestionTemplate& tmpl, const VariableMask& mask, const Scene& scene,
                        const Lexicon& lexicon, const DistributionProfile& profile, Rng& rng,
                        const InstantiateOptions& options = {});

/// Exactly n records for one scene. Throws Error(InvalidArgument) if n == 0 or the
/// template set is empty.
std::vector<GeneratedQA> generate_qa_set(const Scene& scene, std::size_t n, const TemplateSet& templates,
                                         const Lexicon& lexicon, const DistributionProfile& profile,
                                         Rng& rng);

}  // namespace fridgr
