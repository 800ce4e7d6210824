#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dict2wic {

// One short usage example attached to a sense. Snippets written as
// "a / b" inside one ';'-separated group share `group_id`.
struct UsageSnippet {
  std::string text;
  std::string lemma;
  int sense_ordinal = 0;
  int group_id = 0;
  // Position of the snippet within its sense, counting from 0.
  int index = 0;
  // Set only for snippets taken from a "*"/"**" section.
  std::optional<std::string> category;

  bool operator==(const UsageSnippet&) const = default;
};

struct SpecialExample {
  int level = 1;  // 1 for "*", 2 for "**"
  std::string tag;
  std::string text;

  bool operator==(const SpecialExample&) const = default;
};

struct Sense {
  int ordinal = 0;
  std::string definition;
  std::vector<UsageSnippet> snippets;
  std::vector<SpecialExample> special_examples;

  bool operator==(const Sense&) const = default;
};

struct DictionaryEntry {
  std::string lemma;
  std::vector<Sense> senses;

  bool operator==(const DictionaryEntry&) const = default;
};

struct EntryError {
  std::size_t line = 0;
  std::string lemma;  // empty when the lemma line itself was bad
  std::string reason;
};

struct ParseResult {
  std::vector<DictionaryEntry> entries;
  std::vector<EntryError> errors;
};

enum class ParseMode { kLenient, kStrict };

// SSKJ-lite text. In strict mode the first malformed entry throws
// ParseError; in lenient mode it is skipped and recorded in `errors`.
ParseResult parse_dictionary(std::string_view input,
                             ParseMode mode = ParseMode::kLenient);

// Structured alternative: one JSON object per line.
ParseResult parse_dictionary_jsonl(std::string_view input,
                                   ParseMode mode = ParseMode::kLenient);

// Canonical SSKJ-lite text. Throws InvalidArgument for entries whose text
// cannot be represented in the grammar (delimiters inside snippets, etc.).
std::string serialize_dictionary(const std::vector<DictionaryEntry>& entries);

nlohmann::json entry_to_json(const DictionaryEntry& entry);
DictionaryEntry entry_from_json(const nlohmann::json& j);
std::string serialize_dictionary_jsonl(
    const std::vector<DictionaryEntry>& entries);

// Throws InvalidArgument describing the first violated invariant.
void validate_entry(const DictionaryEntry& entry);

enum class SnippetMode { kCoreOnly, kCoreAndSpecial };

std::vector<UsageSnippet> extract_snippets(
    const std::vector<DictionaryEntry>& entries,
    SnippetMode mode = SnippetMode::kCoreOnly);

std::vector<DictionaryEntry> filter_multisense(
    const std::vector<DictionaryEntry>& entries);

std::vector<DictionaryEntry> restrict_to_lemmas(
    const std::vector<DictionaryEntry>& entries,
    const std::set<std::string>& allowlist);

}  // namespace dict2wic
