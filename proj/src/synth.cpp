// Copyright 2026 The labelaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Synthetic corpora and label corruption.
//
// The generator draws a vocabulary of pseudo-words and fixes a codebook up
// front: every entity type owns a lexicon of capitalized names and a few
// lowercase trigger words. Names never move between types, so a consistent
// labeling function exists by construction. Corruption then breaks that
// codebook in a controlled number of sentences.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "labelaudit/corpus.hpp"
#include "labelaudit/errors.hpp"
#include "labelaudit/rng.hpp"

namespace labelaudit::corpus {

namespace {

constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p",
                                        "r", "s", "t", "v", "z", "br", "st", "tr", "kl"};
constexpr std::string_view kNuclei[] = {"a", "e", "i", "o", "u", "ai", "ou"};
constexpr std::string_view kCodas[] = {"", "", "n", "r", "s", "l", "m"};

class WordFactory {
 public:
  explicit WordFactory(std::uint64_t seed) : rng_(seed) {}

  std::string fresh() {
    for (;;) {
      const std::size_t syllables = 1 + rng_.below(3);
      std::string w;
      for (std::size_t i = 0; i < syllables; ++i) {
        w += kOnsets[rng_.below(std::size(kOnsets))];
        w += kNuclei[rng_.below(std::size(kNuclei))];
        w += kCodas[rng_.below(std::size(kCodas))];
      }
      if (w.size() >= 2 && used_.insert(w).second) return w;
    }
  }

 private:
  Rng rng_;
  std::set<std::string> used_;
};

std::string capitalize(std::string w) {
  w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
  return w;
}

struct Codebook {
  std::vector<std::string> fillers;
  // Per type: lexicon of names (each 1-2 tokens) and trigger words.
  std::vector<std::vector<std::vector<std::string>>> names;
  std::vector<std::vector<std::string>> triggers;
};

Codebook make_codebook(const SynthParams& p) {
  WordFactory words(derive_seed(p.seed, hash_name("codebook")));
  Rng rng(derive_seed(p.seed, hash_name("lexicon")));
  const std::size_t n_types = p.entity_types.size();
  constexpr std::size_t kTriggersPerType = 3;

  const auto name_words = static_cast<std::size_t>(
      std::llround(static_cast<double>(p.vocab_size) * p.name_share));
  const std::size_t per_type = std::max<std::size_t>(2, name_words / n_types);
  const std::size_t reserved = per_type * n_types + kTriggersPerType * n_types;
  const std::size_t n_fillers =
      p.vocab_size > reserved + 5 ? p.vocab_size - reserved : 5;

  Codebook cb;
  for (std::size_t i = 0; i < n_fillers; ++i) cb.fillers.push_back(words.fresh());
  cb.names.resize(n_types);
  cb.triggers.resize(n_types);
  for (std::size_t t = 0; t < n_types; ++t) {
    for (std::size_t k = 0; k < kTriggersPerType; ++k)
      cb.triggers[t].push_back(words.fresh());
    // per_type words become names; about a third pair up into two-token names.
    std::size_t left = per_type;
    while (left > 0) {
      std::vector<std::string> name{capitalize(words.fresh())};
      --left;
      if (left > 0 && rng.bernoulli(0.3)) {
        name.push_back(capitalize(words.fresh()));
        --left;
      }
      cb.names[t].push_back(std::move(name));
    }
  }
  return cb;
}

// Skewed toward low indices so some names recur often and most are rare.
std::size_t skewed_index(Rng& rng, std::size_t n) {
  const double u = rng.uniform();
  return std::min(n - 1, static_cast<std::size_t>(u * u * static_cast<double>(n)));
}

}  // namespace

Dataset synthesize_corpus(const SynthParams& p, std::string name) {
  if (p.n_sentences < 1) throw ConfigError("synthesize_corpus: n_sentences must be >= 1");
  if (p.vocab_size < 10) throw ConfigError("synthesize_corpus: vocab_size must be >= 10");
  if (p.entity_types.empty())
    throw ConfigError("synthesize_corpus: at least one entity type is required");
  if (p.min_filler < 1 || p.max_filler < p.min_filler || p.max_entities < 1)
    throw ConfigError("synthesize_corpus: bad sentence shape parameters");
  for (const auto& t : p.entity_types) {
    if (t.empty() || std::ranges::any_of(t, [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      throw ConfigError("synthesize_corpus: bad entity type '" + t + "'");
  }

  const Codebook cb = make_codebook(p);
  Rng rng(derive_seed(p.seed, hash_name("sentences")));
  const std::size_t n_types = p.entity_types.size();

  std::vector<Sentence> sentences;
  sentences.reserve(p.n_sentences);
  for (std::size_t s = 0; s < p.n_sentences; ++s) {
    const std::size_t n_fill = p.min_filler + rng.below(p.max_filler - p.min_filler + 1);
    // 1..max_entities mentions, each anchored after a distinct filler slot.
    const std::size_t n_ent = std::min<std::size_t>(1 + rng.below(p.max_entities), n_fill);
    std::vector<std::size_t> slots(n_fill);
    std::iota(slots.begin(), slots.end(), 0);
    rng.shuffle(std::span(slots));
    std::vector<bool> anchor(n_fill, false);
    for (std::size_t e = 0; e < n_ent; ++e) anchor[slots[e]] = true;

    Sentence sentence;
    for (std::size_t f = 0; f < n_fill; ++f) {
      sentence.tokens.push_back({cb.fillers[skewed_index(rng, cb.fillers.size())],
                                 std::string(kOutside)});
      if (!anchor[f]) continue;
      const std::size_t t = rng.below(n_types);
      if (rng.bernoulli(p.trigger_probability))
        sentence.tokens.push_back({cb.triggers[t][rng.below(cb.triggers[t].size())],
                                   std::string(kOutside)});
      const auto& mention = cb.names[t][skewed_index(rng, cb.names[t].size())];
      for (std::size_t i = 0; i < mention.size(); ++i)
        sentence.tokens.push_back(
            {mention[i], (i == 0 ? "B-" : "I-") + p.entity_types[t]});
    }
    sentences.push_back(std::move(sentence));
  }
  return Dataset(std::move(sentences), std::move(name));
}

Dataset synthesize_corpus(std::size_t n_sentences, std::size_t vocab_size,
                          const std::vector<std::string>& entity_types, std::uint64_t seed) {
  SynthParams p;
  p.n_sentences = n_sentences;
  p.vocab_size = vocab_size;
  p.entity_types = entity_types;
  p.seed = seed;
  return synthesize_corpus(p);
}

std::string_view to_string(CorruptionMode mode) {
  switch (mode) {
    case CorruptionMode::kTypePermutation:
      return "type-permutation";
    case CorruptionMode::kBoundaryShift:
      return "boundary-shift";
    case CorruptionMode::kSpanDrop:
      return "span-drop";
  }
  return "?";
}

CorruptionMode corruption_mode_from_string(std::string_view name) {
  if (name == "type-permutation") return CorruptionMode::kTypePermutation;
  if (name == "boundary-shift") return CorruptionMode::kBoundaryShift;
  if (name == "span-drop") return CorruptionMode::kSpanDrop;
  throw ConfigError("unknown corruption mode '" + std::string(name) + "'");
}

std::size_t corruption_count(double fraction, std::size_t n_sentences) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n_sentences)));
}

namespace {

// Each corruptor returns false when the sentence offers nothing to alter.
using Labels = std::vector<std::string>;

bool permute_types(Labels& labels, const std::map<std::string, std::string>& derangement) {
  auto spans = extract_spans(labels);
  if (spans.empty()) return false;
  for (auto& s : spans) s.entity_type = derangement.at(s.entity_type);
  labels = render_spans(spans, labels.size());
  return true;
}

bool shift_boundary(Labels& labels, Rng& rng) {
  auto spans = extract_spans(labels);
  const std::size_t n = labels.size();
  struct Move {
    std::size_t span;
    int kind;  // 0 extend left, 1 extend right, 2 shrink left, 3 shrink right
  };
  std::vector<Move> moves;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const auto& s = spans[k];
    if (s.start > 0 && labels[s.start - 1] == kOutside) moves.push_back({k, 0});
    if (s.end < n && labels[s.end] == kOutside) moves.push_back({k, 1});
    if (s.end - s.start >= 2) {
      moves.push_back({k, 2});
      moves.push_back({k, 3});
    }
  }
  if (moves.empty()) return false;
  const Move m = moves[rng.below(moves.size())];
  Span& s = spans[m.span];
  switch (m.kind) {
    case 0: --s.start; break;
    case 1: ++s.end; break;
    case 2: ++s.start; break;
    default: --s.end; break;
  }
  labels = render_spans(spans, n);
  return true;
}

bool drop_span(Labels& labels, Rng& rng) {
  auto spans = extract_spans(labels);
  if (spans.empty()) return false;
  spans.erase(spans.begin() + static_cast<std::ptrdiff_t>(rng.below(spans.size())));
  labels = render_spans(spans, labels.size());
  return true;
}

}  // namespace

CorruptionResult corrupt_labels(const Dataset& dataset, const CorruptionSpec& spec) {
  if (!(spec.fraction >= 0.0 && spec.fraction <= 1.0))
    throw ConfigError("corruption fraction must lie in [0, 1]");
  const std::size_t target = corruption_count(spec.fraction, dataset.size());
  if (target == 0) return {dataset, {}};

  std::map<std::string, std::string> derangement;
  if (spec.mode == CorruptionMode::kTypePermutation) {
    const std::vector<std::string> types(dataset.label_alphabet().begin(),
                                         dataset.label_alphabet().end());
    if (types.size() < 2)
      throw DataError("type-permutation needs at least two entity types; achievable count 0");
    for (std::size_t i = 0; i < types.size(); ++i)
      derangement[types[i]] = types[(i + 1) % types.size()];
  }

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(spec.seed, hash_name("corrupt-order")));
  rng.shuffle(std::span(order));

  std::vector<Sentence> sentences = dataset.sentences();
  std::vector<std::size_t> altered;
  for (std::size_t idx : order) {
    if (altered.size() == target) break;
    Labels labels = sentences[idx].labels();
    Rng local(derive_seed(spec.seed, idx));
    bool changed = false;
    switch (spec.mode) {
      case CorruptionMode::kTypePermutation: changed = permute_types(labels, derangement); break;
      case CorruptionMode::kBoundaryShift: changed = shift_boundary(labels, local); break;
      case CorruptionMode::kSpanDrop: changed = drop_span(labels, local); break;
    }
    if (!changed) continue;
    for (std::size_t i = 0; i < labels.size(); ++i)
      sentences[idx].tokens[i].label = std::move(labels[i]);
    altered.push_back(idx);
  }
  if (altered.size() < target)
    throw DataError("only " + std::to_string(altered.size()) + " sentences are eligible for " +
                    std::string(to_string(spec.mode)) + " corruption; " +
                    std::to_string(target) + " requested");
  std::ranges::sort(altered);
  return {Dataset(std::move(sentences), dataset.name()), std::move(altered)};
}

}  // namespace labelaudit::corpus
