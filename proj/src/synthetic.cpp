#include "dict2wic/synthetic.hpp"

#include <set>

#include "dict2wic/errors.hpp"
#include "dict2wic/matching.hpp"
#include "dict2wic/random.hpp"

namespace dict2wic {

namespace {

const std::vector<std::string> kSyllables = {"ka", "lo", "mi", "še", "ru", "po",
                                             "da", "vi", "že", "no", "te", "či",
                                             "ba", "sa", "ju", "ne"};
const std::vector<std::string> kClusters = {"gra", "tre", "ple", "sko",
                                            "dru", "kve", "sme", "bli"};
const std::vector<std::string> kFillers = {
    "danes", "včeraj", "hiša", "lepo", "zelo", "mesto", "pot",  "reka",
    "drevo", "knjiga", "sonce", "veter", "oče",  "mama", "vrt",  "ulica"};
const std::vector<std::string> kSuffixes = {"", "a", "om", "u", "i"};

class Builder {
 public:
  static constexpr int kMaxAttempts = 100000;

  Builder(const SynthOptions& options)
      : options_(options), rng_(options.seed), matcher_(LemmaMatchPolicy{}) {}

  const std::string& pick(const std::vector<std::string>& v) {
    return v[rng_.uniform_index(v.size())];
  }

  int between(int lo, int hi) {
    return lo + static_cast<int>(rng_.uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(double p) { return rng_.uniform_real() < p; }

  std::string fresh_lemma() {
    for (int attempt = 0;; ++attempt) {
      if (attempt > kMaxAttempts) throw InvalidArgument("lemma space exhausted");
      std::string lemma = pick(kSyllables) + pick(kSyllables) + pick(kSyllables);
      if (used_.contains(lemma)) continue;
      bool collides = false;
      for (const std::string& w : kFillers) collides |= matcher_.token_matches(w, lemma);
      if (collides) continue;
      used_.insert(lemma);
      return lemma;
    }
  }

  std::string topic_word() {
    return pick(kClusters) + pick(kSyllables) + pick(kSyllables);
  }

  std::vector<std::string> topics(int senses) {
    std::vector<std::string> out;
    for (int attempt = 0; static_cast<int>(out.size()) < 2 * senses; ++attempt) {
      if (attempt > kMaxAttempts) throw InvalidArgument("topic space exhausted");
      std::string w = topic_word();
      if (used_.insert(w).second) out.push_back(w);
    }
    return out;
  }

  std::string sentence(const std::string& lemma, const std::string& t1,
                       const std::string& t2, bool with_lemma) {
    std::vector<std::string> words = {pick(kFillers), t1,
                                      with_lemma ? lemma + pick(kSuffixes)
                                                 : pick(kFillers),
                                      t2, pick(kFillers), pick(kFillers)};
    rng_.shuffle(words);
    std::string out;
    for (const std::string& w : words) {
      if (!out.empty()) out += ' ';
      out += w;
    }
    if (out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out + ".";
  }

  const SynthOptions& options() const { return options_; }
  const LemmaMatcher& matcher() const { return matcher_; }

 private:
  const SynthOptions& options_;
  Rng rng_;
  LemmaMatcher matcher_;
  std::set<std::string> used_;
};

void check(const SynthOptions& o) {
  if (o.lemmas < 1 || o.external_lemmas < 0 || o.external_overlap < 0 ||
      o.external_overlap > o.lemmas || o.external_overlap > o.external_lemmas) {
    throw InvalidArgument("inconsistent synthetic lemma counts");
  }
  if (o.min_senses < 2 || o.max_senses < o.min_senses || o.min_snippets < 1 ||
      o.max_snippets < o.min_snippets || o.external_examples_per_sense < 1) {
    throw InvalidArgument("inconsistent synthetic sense counts");
  }
}

}  // namespace

SynthCorpus make_synthetic_corpus(const SynthOptions& options,
                                  const ExpansionSettings& settings) {
  check(options);
  Builder b(options);
  SynthCorpus corpus;

  std::string dictionary;
  std::vector<std::string> lemmas;
  std::map<std::string, std::vector<std::string>> topics_by_lemma;
  for (int l = 0; l < options.lemmas; ++l) {
    const std::string lemma = b.fresh_lemma();
    const int senses = b.between(options.min_senses, options.max_senses);
    const auto topics = b.topics(senses);
    lemmas.push_back(lemma);
    topics_by_lemma[lemma] = topics;
    if (!dictionary.empty()) dictionary += "\n";
    dictionary += lemma + "\n";
    for (int s = 0; s < senses; ++s) {
      dictionary += std::to_string(s + 1) + ". pomen povezan z besedo " +
                    topics[2 * s] + ": ";
      const int snippets = b.between(options.min_snippets, options.max_snippets);
      for (int k = 0; k < snippets; ++k) {
        if (k > 0) dictionary += "; ";
        dictionary += b.pick(kFillers) + " " + topics[2 * s + k % 2] + " " + lemma;
      }
      dictionary += "\n";
    }
  }
  ParseResult parsed = parse_dictionary(dictionary, ParseMode::kStrict);
  corpus.entries = std::move(parsed.entries);

  for (const UsageSnippet& s : extract_snippets(corpus.entries)) {
    const ExpansionRequest request = make_request(s, settings);
    const auto& topics = topics_by_lemma.at(s.lemma);
    const std::string& t1 = topics[2 * (s.sense_ordinal - 1)];
    const std::string& t2 = topics[2 * (s.sense_ordinal - 1) + 1];
    std::string previous;
    for (int g = 0; g < request.n_generations; ++g) {
      std::string text;
      if (g > 0 && b.chance(options.duplicate_rate)) {
        text = previous;
      } else {
        text = b.sentence(s.lemma, t1, t2, !b.chance(options.missing_lemma_rate));
      }
      previous = text;
      corpus.cache.push_back(
          {ExpansionCache::make_key(request.model_id, request.prompt,
                                    request.temperature, g),
           request.model_id, request.prompt, request.temperature, g, text});
    }
  }

  std::vector<std::string> external_lemmas(lemmas.begin(),
                                           lemmas.begin() + options.external_overlap);
  while (static_cast<int>(external_lemmas.size()) < options.external_lemmas) {
    external_lemmas.push_back(b.fresh_lemma());
  }
  for (const std::string& lemma : external_lemmas) {
    const int senses = b.between(options.min_senses, options.max_senses);
    const auto topics = b.topics(senses);
    for (int s = 0; s < senses; ++s) {
      for (int k = 0; k < options.external_examples_per_sense; ++k) {
        SenseExample e;
        e.id = "elexis:" + lemma + ":" + std::to_string(s + 1) + ":" +
               std::to_string(k);
        e.lemma = lemma;
        e.sentence = b.sentence(lemma, topics[2 * s], topics[2 * s + 1], true);
        const auto span = b.matcher().locate(e.sentence, lemma);
        e.target_start = span.start;
        e.target_end = span.end;
        e.sense_id = sense_id_for(lemma, s + 1);
        e.inventory_id = "elexis";
        e.source = ExampleSource::kCorpus;
        corpus.external.push_back(std::move(e));
      }
    }
  }
  return corpus;
}

std::string cache_jsonl(const std::vector<CacheRecord>& records) {
  std::string out;
  for (const CacheRecord& r : records) {
    out += nlohmann::json{{"key", r.key},
                          {"model", r.model},
                          {"prompt", r.prompt},
                          {"temperature", r.temperature},
                          {"index", r.index},
                          {"text", r.text}}
               .dump() +
           "\n";
  }
  return out;
}

}  // namespace dict2wic
