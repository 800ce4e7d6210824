#include "dict2wic/matching.hpp"

#include <algorithm>
#include <iostream>

#include "dict2wic/errors.hpp"
#include "dict2wic/text.hpp"

namespace dict2wic {

std::string to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::kExactToken:
      return "exact-token";
    case MatchKind::kStemPrefix:
      return "stem-prefix";
    case MatchKind::kExternalLemmatizer:
      return "lemmatizer";
  }
  return "stem-prefix";
}

MatchKind match_kind_from_string(std::string_view s) {
  if (s == "exact-token") return MatchKind::kExactToken;
  if (s == "stem-prefix") return MatchKind::kStemPrefix;
  if (s == "lemmatizer" || s == "external-lemmatizer") {
    return MatchKind::kExternalLemmatizer;
  }
  throw InvalidArgument("unknown match policy '" + std::string(s) + "'");
}

TableLemmatizer TableLemmatizer::from_tsv(std::string_view content) {
  TableLemmatizer table;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) continue;
    std::string_view lemma = line.substr(tab + 1);
    if (!lemma.empty() && lemma.back() == '\r') lemma.remove_suffix(1);
    table.add(line.substr(0, tab), lemma);
  }
  return table;
}

void TableLemmatizer::add(std::string_view form, std::string_view lemma) {
  forms_[text::casefold(text::nfc(form))] = text::nfc(lemma);
}

std::optional<std::string> TableLemmatizer::lemmatize(
    std::string_view token) const {
  auto it = forms_.find(text::casefold(token));
  if (it == forms_.end()) return std::nullopt;
  return it->second;
}

std::size_t stem_length(std::size_t lemma_length, std::size_t min_stem_length) {
  // ceil(0.7 * n) in integers; the floating-point product overshoots for
  // multiples of 10.
  const std::size_t scaled = (7 * lemma_length + 9) / 10;
  const std::size_t wanted = std::max(min_stem_length, scaled);
  return std::min(wanted, lemma_length);
}

LemmaMatcher::LemmaMatcher(LemmaMatchPolicy policy, const Lemmatizer* lemmatizer)
    : policy_(policy), lemmatizer_(lemmatizer) {
  if (policy_.min_stem_length == 0) {
    throw InvalidArgument("min_stem_length must be positive");
  }
  if (policy_.kind == MatchKind::kExternalLemmatizer && lemmatizer_ == nullptr) {
    warning_ = "external lemmatizer unavailable; falling back to stem-prefix";
    std::cerr << "warning: " << *warning_ << '\n';
    policy_.kind = MatchKind::kStemPrefix;
  }
}

bool LemmaMatcher::token_matches(std::string_view token,
                                 std::string_view lemma) const {
  if (token.empty() || lemma.empty()) return false;
  auto fold = [&](std::string_view s) {
    return policy_.case_sensitive ? std::string(s) : text::casefold(s);
  };
  switch (policy_.kind) {
    case MatchKind::kExactToken:
      return fold(token) == fold(lemma);
    case MatchKind::kStemPrefix: {
      const std::size_t n =
          stem_length(text::length(lemma), policy_.min_stem_length);
      return fold(token).starts_with(fold(text::prefix(lemma, n)));
    }
    case MatchKind::kExternalLemmatizer: {
      const auto mapped = lemmatizer_->lemmatize(token);
      return mapped && fold(*mapped) == fold(lemma);
    }
  }
  return false;
}

bool LemmaMatcher::present(std::string_view sentence,
                           std::string_view lemma) const {
  for (const text::Token& token : text::tokenize(sentence)) {
    if (token_matches(token.text, lemma)) return true;
  }
  return false;
}

LemmaMatcher::Span LemmaMatcher::locate(std::string_view sentence,
                                        std::string_view lemma) const {
  for (const text::Token& token : text::tokenize(sentence)) {
    if (token_matches(token.text, lemma)) return {token.start, token.end};
  }
  throw InvalidArgument("lemma '" + std::string(lemma) +
                        "' not found in sentence '" + std::string(sentence) +
                        "'");
}

bool lemma_present(std::string_view sentence, std::string_view lemma,
                   const LemmaMatchPolicy& policy,
                   const Lemmatizer* lemmatizer) {
  return LemmaMatcher(policy, lemmatizer).present(sentence, lemma);
}

LemmaMatcher::Span locate_target(std::string_view sentence,
                                 std::string_view lemma,
                                 const LemmaMatchPolicy& policy,
                                 const Lemmatizer* lemmatizer) {
  return LemmaMatcher(policy, lemmatizer).locate(sentence, lemma);
}

}  // namespace dict2wic
