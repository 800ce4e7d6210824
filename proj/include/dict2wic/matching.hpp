#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace dict2wic {

enum class MatchKind { kExactToken, kStemPrefix, kExternalLemmatizer };

std::string to_string(MatchKind kind);
MatchKind match_kind_from_string(std::string_view s);

struct LemmaMatchPolicy {
  MatchKind kind = MatchKind::kStemPrefix;
  std::size_t min_stem_length = 4;
  bool case_sensitive = false;
};

// Maps surface tokens to lemmas.
class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::optional<std::string> lemmatize(std::string_view token) const = 0;
};

// Lookup table of (form, lemma) pairs, e.g. loaded from a TSV file with one
// "form<TAB>lemma" line per form.
class TableLemmatizer : public Lemmatizer {
 public:
  TableLemmatizer() = default;
  static TableLemmatizer from_tsv(std::string_view content);

  void add(std::string_view form, std::string_view lemma);
  std::optional<std::string> lemmatize(std::string_view token) const override;

 private:
  std::map<std::string, std::string> forms_;
};

// Number of leading scalar values of the lemma a token must share under the
// stem-prefix policy: max(min_stem_length, ceil(0.7 * |lemma|)), capped at
// the lemma length.
std::size_t stem_length(std::size_t lemma_length, std::size_t min_stem_length);

// Applies a match policy to sentences. When the policy asks for an external
// lemmatizer and none is supplied, the matcher falls back to stem-prefix and
// records a warning.
class LemmaMatcher {
 public:
  explicit LemmaMatcher(LemmaMatchPolicy policy,
                        const Lemmatizer* lemmatizer = nullptr);

  bool token_matches(std::string_view token, std::string_view lemma) const;
  bool present(std::string_view sentence, std::string_view lemma) const;

  struct Span {
    std::size_t start = 0;
    std::size_t end = 0;
    bool operator==(const Span&) const = default;
  };
  // Span of the first matching token; throws InvalidArgument when absent.
  Span locate(std::string_view sentence, std::string_view lemma) const;

  const LemmaMatchPolicy& effective_policy() const { return policy_; }
  const std::optional<std::string>& warning() const { return warning_; }

 private:
  LemmaMatchPolicy policy_;
  const Lemmatizer* lemmatizer_;
  std::optional<std::string> warning_;
};

bool lemma_present(std::string_view sentence, std::string_view lemma,
                   const LemmaMatchPolicy& policy,
                   const Lemmatizer* lemmatizer = nullptr);

LemmaMatcher::Span locate_target(std::string_view sentence,
                                 std::string_view lemma,
                                 const LemmaMatchPolicy& policy,
                                 const Lemmatizer* lemmatizer = nullptr);

}  // namespace dict2wic
