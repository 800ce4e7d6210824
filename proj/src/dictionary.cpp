#include "dict2wic/dictionary.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dict2wic/errors.hpp"
#include "dict2wic/text.hpp"

namespace dict2wic {

namespace {

constexpr std::string_view kElision = "[...]";

struct Line {
  std::size_t number = 0;
  std::string text;
};

std::vector<Line> split_lines(std::string_view input) {
  std::vector<Line> lines;
  std::size_t number = 1;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    std::size_t nl = input.find('\n', pos);
    if (nl == std::string_view::npos) nl = input.size();
    std::string_view line = input.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({number++, std::string(line)});
    if (nl == input.size()) break;
    pos = nl + 1;
  }
  return lines;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t';
  });
}

std::vector<std::string> split(std::string_view s, char delimiter) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(delimiter, pos);
    if (next == std::string_view::npos) {
      parts.emplace_back(s.substr(pos));
      break;
    }
    parts.emplace_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

// Length of a "<digits>. " prefix, or 0 when the line does not open a sense.
std::size_t sense_prefix_length(std::string_view line, int& ordinal) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    ++i;
  }
  if (i == 0 || i > 9 || i + 1 >= line.size() || line[i] != '.' ||
      line[i + 1] != ' ') {
    return 0;
  }
  ordinal = std::stoi(std::string(line.substr(0, i)));
  return i + 2;
}

// 1 for "* ", 2 for "** ", 0 otherwise.
int special_level(std::string_view line) {
  if (line.starts_with("** ")) return 2;
  if (line.starts_with("* ")) return 1;
  return 0;
}

bool keep_item(const std::string& item) {
  return !item.empty() && item != kElision;
}

void parse_snippets(std::string_view body, const std::string& lemma,
                    Sense& sense) {
  int group = 0;
  for (const std::string& raw_group : split(body, ';')) {
    bool any = false;
    for (const std::string& raw : split(raw_group, '/')) {
      std::string item = text::normalize(raw);
      if (!keep_item(item)) continue;
      UsageSnippet snippet;
      snippet.text = std::move(item);
      snippet.lemma = lemma;
      snippet.sense_ordinal = sense.ordinal;
      snippet.group_id = group;
      snippet.index = static_cast<int>(sense.snippets.size());
      sense.snippets.push_back(std::move(snippet));
      any = true;
    }
    if (any) ++group;
  }
}

void parse_special(std::string_view body, int level, Sense& sense) {
  std::string tag;
  for (const std::string& raw : split(body, ';')) {
    std::string item = text::normalize(raw);
    if (!keep_item(item)) continue;
    const std::size_t space = item.find(' ');
    if (space != std::string::npos && space > 1 && item[space - 1] == '.') {
      tag = item.substr(0, space - 1);
      item = item.substr(space + 1);
    }
    sense.special_examples.push_back({level, tag, std::move(item)});
  }
}

DictionaryEntry parse_block(const std::vector<Line>& block) {
  // Join continuation lines (leading whitespace) into logical lines.
  std::vector<Line> logical;
  for (const Line& line : block) {
    if (!logical.empty() && (line.text[0] == ' ' || line.text[0] == '\t')) {
      logical.back().text += ' ';
      logical.back().text += line.text;
    } else {
      logical.push_back(line);
    }
  }

  DictionaryEntry entry;
  const Line& head = logical.front();
  int ordinal = 0;
  if (sense_prefix_length(head.text, ordinal) > 0 ||
      special_level(head.text) > 0) {
    throw ParseError(head.number, "entry does not start with a lemma line");
  }
  entry.lemma = text::normalize(head.text);
  if (entry.lemma.empty()) throw ParseError(head.number, "empty lemma");

  for (std::size_t i = 1; i < logical.size(); ++i) {
    const Line& line = logical[i];
    if (const int level = special_level(line.text); level > 0) {
      if (entry.senses.empty()) {
        throw ParseError(line.number, "special section before first sense");
      }
      parse_special(std::string_view(line.text).substr(level + 1), level,
                    entry.senses.back());
      continue;
    }
    const std::size_t skip = sense_prefix_length(line.text, ordinal);
    if (skip == 0) throw ParseError(line.number, "missing sense number");
    const int expected = static_cast<int>(entry.senses.size()) + 1;
    if (ordinal != expected) {
      throw ParseError(line.number, "sense number " + std::to_string(ordinal) +
                                        " where " + std::to_string(expected) +
                                        " was expected");
    }
    std::string_view rest = std::string_view(line.text).substr(skip);
    const std::size_t colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line.number, "definition without colon");
    }
    Sense sense;
    sense.ordinal = ordinal;
    sense.definition = text::normalize(rest.substr(0, colon));
    if (sense.definition.empty()) {
      throw ParseError(line.number, "empty definition");
    }
    parse_snippets(rest.substr(colon + 1), entry.lemma, sense);
    entry.senses.push_back(std::move(sense));
  }
  if (entry.senses.empty()) {
    throw ParseError(head.number, "entry has no numbered senses");
  }
  return entry;
}

void fail(const std::string& lemma, const std::string& what) {
  throw InvalidArgument("entry '" + lemma + "': " + what);
}

bool contains_any(std::string_view s, std::string_view chars) {
  return s.find_first_of(chars) != std::string_view::npos;
}

bool is_normalized_text(const std::string& s) {
  return text::normalize(s) == s;
}

}  // namespace

ParseResult parse_dictionary(std::string_view input, ParseMode mode) {
  if (!text::is_valid_utf8(input)) {
    throw InvalidArgument("dictionary text is not valid UTF-8");
  }
  ParseResult result;
  std::vector<Line> block;
  auto flush = [&] {
    if (block.empty()) return;
    try {
      result.entries.push_back(parse_block(block));
    } catch (const ParseError& e) {
      if (mode == ParseMode::kStrict) throw;
      result.errors.push_back(
          {e.line(), text::normalize(block.front().text), e.reason()});
    }
    block.clear();
  };
  for (Line& line : split_lines(input)) {
    if (is_blank(line.text)) {
      flush();
    } else {
      block.push_back(std::move(line));
    }
  }
  flush();
  return result;
}

void validate_entry(const DictionaryEntry& entry) {
  const std::string& lemma = entry.lemma;
  if (lemma.empty()) fail(lemma, "empty lemma");
  if (!is_normalized_text(lemma)) fail(lemma, "lemma is not normalized");
  int ordinal = 0;
  if (sense_prefix_length(lemma, ordinal) > 0 || special_level(lemma) > 0) {
    fail(lemma, "lemma reads as a sense or special line");
  }
  if (entry.senses.empty()) fail(lemma, "no senses");
  for (std::size_t i = 0; i < entry.senses.size(); ++i) {
    const Sense& sense = entry.senses[i];
    if (sense.ordinal != static_cast<int>(i) + 1) {
      fail(lemma, "sense ordinals are not contiguous from 1");
    }
    if (sense.definition.empty()) fail(lemma, "empty definition");
    if (!is_normalized_text(sense.definition) ||
        contains_any(sense.definition, ":")) {
      fail(lemma, "definition is not normalized or contains ':'");
    }
    int previous_group = -1;
    for (std::size_t k = 0; k < sense.snippets.size(); ++k) {
      const UsageSnippet& s = sense.snippets[k];
      if (s.text.empty() || s.text == kElision ||
          !is_normalized_text(s.text) || contains_any(s.text, ";/")) {
        fail(lemma, "snippet text '" + s.text + "' is not representable");
      }
      if (s.lemma != lemma || s.sense_ordinal != sense.ordinal ||
          s.index != static_cast<int>(k) || s.category.has_value()) {
        fail(lemma, "snippet back-references are inconsistent");
      }
      if (s.group_id != previous_group && s.group_id != previous_group + 1) {
        fail(lemma, "snippet group ids are not consecutive");
      }
      if (k == 0 && s.group_id != 0) fail(lemma, "first group id is not 0");
      previous_group = s.group_id;
    }
    for (const SpecialExample& x : sense.special_examples) {
      if (x.level != 1 && x.level != 2) fail(lemma, "special level not 1|2");
      if (x.tag.empty() || contains_any(x.tag, " \t\n;")) {
        fail(lemma, "special tag '" + x.tag + "' is not representable");
      }
      if (x.text.empty() || x.text == kElision ||
          !is_normalized_text(x.text) || contains_any(x.text, ";")) {
        fail(lemma, "special text '" + x.text + "' is not representable");
      }
    }
  }
}

std::string serialize_dictionary(const std::vector<DictionaryEntry>& entries) {
  std::ostringstream out;
  bool first = true;
  for (const DictionaryEntry& entry : entries) {
    validate_entry(entry);
    if (!first) out << '\n';
    first = false;
    out << entry.lemma << '\n';
    for (const Sense& sense : entry.senses) {
      out << sense.ordinal << ". " << sense.definition << ':';
      for (std::size_t k = 0; k < sense.snippets.size(); ++k) {
        const UsageSnippet& s = sense.snippets[k];
        if (k == 0) {
          out << ' ';
        } else if (s.group_id == sense.snippets[k - 1].group_id) {
          out << " / ";
        } else {
          out << "; ";
        }
        out << s.text;
      }
      out << '\n';
      const auto& special = sense.special_examples;
      for (std::size_t k = 0; k < special.size(); ++k) {
        if (k == 0 || special[k].level != special[k - 1].level) {
          if (k > 0) out << '\n';
          out << (special[k].level == 2 ? "** " : "* ");
        } else {
          out << "; ";
        }
        out << special[k].tag << ". " << special[k].text;
      }
      if (!special.empty()) out << '\n';
    }
  }
  return out.str();
}

nlohmann::json entry_to_json(const DictionaryEntry& entry) {
  nlohmann::json senses = nlohmann::json::array();
  for (const Sense& sense : entry.senses) {
    nlohmann::json snippets = nlohmann::json::array();
    for (const UsageSnippet& s : sense.snippets) {
      snippets.push_back({{"text", s.text}, {"group", s.group_id}});
    }
    nlohmann::json special = nlohmann::json::array();
    for (const SpecialExample& x : sense.special_examples) {
      special.push_back({{"tag", x.tag}, {"text", x.text}, {"level", x.level}});
    }
    senses.push_back({{"ordinal", sense.ordinal},
                      {"definition", sense.definition},
                      {"snippets", std::move(snippets)},
                      {"special", std::move(special)}});
  }
  return {{"lemma", entry.lemma}, {"senses", std::move(senses)}};
}

DictionaryEntry entry_from_json(const nlohmann::json& j) {
  try {
    DictionaryEntry entry;
    entry.lemma = text::normalize(j.at("lemma").get<std::string>());
    for (const auto& js : j.at("senses")) {
      Sense sense;
      sense.ordinal = js.at("ordinal").get<int>();
      sense.definition = text::normalize(js.at("definition").get<std::string>());
      int group = -1;
      if (js.contains("snippets")) {
        for (const auto& item : js.at("snippets")) {
          UsageSnippet s;
          if (item.is_string()) {
            s.text = text::normalize(item.get<std::string>());
            s.group_id = ++group;
          } else {
            s.text = text::normalize(item.at("text").get<std::string>());
            s.group_id = item.value("group", group + 1);
            group = s.group_id;
          }
          s.lemma = entry.lemma;
          s.sense_ordinal = sense.ordinal;
          s.index = static_cast<int>(sense.snippets.size());
          sense.snippets.push_back(std::move(s));
        }
      }
      if (js.contains("special")) {
        for (const auto& item : js.at("special")) {
          sense.special_examples.push_back(
              {item.value("level", 1), item.at("tag").get<std::string>(),
               text::normalize(item.at("text").get<std::string>())});
        }
      }
      entry.senses.push_back(std::move(sense));
    }
    validate_entry(entry);
    return entry;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("dictionary entry: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw SchemaError(e.what());
  }
}

ParseResult parse_dictionary_jsonl(std::string_view input, ParseMode mode) {
  ParseResult result;
  for (const Line& line : split_lines(input)) {
    if (is_blank(line.text)) continue;
    try {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line.text);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line.number, std::string("invalid JSON: ") + e.what());
      }
      try {
        result.entries.push_back(entry_from_json(j));
      } catch (const SchemaError& e) {
        throw ParseError(line.number, e.what());
      }
    } catch (const ParseError& e) {
      if (mode == ParseMode::kStrict) throw;
      std::string lemma;
      result.errors.push_back({e.line(), lemma, e.reason()});
    }
  }
  return result;
}

std::string serialize_dictionary_jsonl(
    const std::vector<DictionaryEntry>& entries) {
  std::string out;
  for (const DictionaryEntry& entry : entries) {
    out += entry_to_json(entry).dump();
    out += '\n';
  }
  return out;
}

std::vector<UsageSnippet> extract_snippets(
    const std::vector<DictionaryEntry>& entries, SnippetMode mode) {
  std::vector<UsageSnippet> out;
  for (const DictionaryEntry& entry : entries) {
    for (const Sense& sense : entry.senses) {
      out.insert(out.end(), sense.snippets.begin(), sense.snippets.end());
      if (mode != SnippetMode::kCoreAndSpecial) continue;
      int group =
          sense.snippets.empty() ? 0 : sense.snippets.back().group_id + 1;
      int index = static_cast<int>(sense.snippets.size());
      for (const SpecialExample& x : sense.special_examples) {
        UsageSnippet s;
        s.text = x.text;
        s.lemma = entry.lemma;
        s.sense_ordinal = sense.ordinal;
        s.group_id = group++;
        s.index = index++;
        s.category = x.tag;
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::vector<DictionaryEntry> filter_multisense(
    const std::vector<DictionaryEntry>& entries) {
  std::vector<DictionaryEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [](const DictionaryEntry& e) { return e.senses.size() >= 2; });
  return out;
}

std::vector<DictionaryEntry> restrict_to_lemmas(
    const std::vector<DictionaryEntry>& entries,
    const std::set<std::string>& allowlist) {
  std::vector<DictionaryEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [&](const DictionaryEntry& e) {
                 return allowlist.contains(e.lemma);
               });
  return out;
}

}  // namespace dict2wic
