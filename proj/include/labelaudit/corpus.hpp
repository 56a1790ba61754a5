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

// CoNLL-style corpora: tokens with BIO2 tags, span extraction, synthetic
// corpus generation and controlled label corruption.

#ifndef LABELAUDIT_CORPUS_HPP_
#define LABELAUDIT_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace labelaudit::corpus {

inline constexpr std::string_view kOutside = "O";

struct Token {
  std::string text;
  std::string label;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<std::string> doc_id;

  std::size_t size() const { return tokens.size(); }
  std::vector<std::string> labels() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// [start, end) token range carrying one entity type.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entity_type;

  friend auto operator<=>(const Span&, const Span&) = default;
};

class Dataset {
 public:
  Dataset() = default;
  // Validates every sentence (BIO2, non-empty whitespace-free tokens) and
  // derives the label alphabet. Throws DataError/TagError.
  Dataset(std::vector<Sentence> sentences, std::string name = {});

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::set<std::string>& label_alphabet() const { return alphabet_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  const Sentence& operator[](std::size_t i) const { return sentences_[i]; }

  // Sentences at the given indices, in that order.
  Dataset subset(std::span<const std::size_t> indices, std::string name = {}) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.sentences_ == b.sentences_;
  }

 private:
  std::vector<Sentence> sentences_;
  std::set<std::string> alphabet_;
  std::string name_;
};

// Tag helpers. A tag is "O", "B-<type>" or "I-<type>" with non-empty type.
bool is_well_formed_tag(std::string_view tag);
char tag_prefix(std::string_view tag);         // 'O', 'B' or 'I'
std::string_view tag_type(std::string_view tag);  // empty for "O"

// Throws TagError at the first malformed tag or BIO2 violation.
void validate_bio2(std::span<const std::string> labels);
bool is_valid_bio2(std::span<const std::string> labels);

// IOB1 (or any mix) to BIO2: an I-T that opens an entity becomes B-T.
std::vector<std::string> normalize_iob1(std::span<const std::string> labels);

// Rewrites illegal I-T continuations to B-T. Same as normalize_iob1 but
// never throws on malformed tags it does not need to touch.
std::vector<std::string> repair_bio2(std::span<const std::string> labels);

std::vector<Span> extract_spans(std::span<const std::string> labels);
std::vector<std::string> render_spans(std::span<const Span> spans, std::size_t length);

struct ConllColumns {
  std::size_t token = 0;
  std::optional<std::size_t> tag;  // unset: last column of each line
};

Dataset parse_conll(std::string_view text, ConllColumns columns = {},
                    std::string name = {});
Dataset read_conll_file(const std::string& path, ConllColumns columns = {});
std::string serialize_conll(const Dataset& dataset);

// Synthetic corpus whose labels follow a fixed lexicon-and-trigger codebook.
struct SynthParams {
  std::size_t n_sentences = 1000;
  std::size_t vocab_size = 1000;
  std::vector<std::string> entity_types = {"PER", "LOC", "ORG"};
  std::uint64_t seed = 0;
  // Share of the vocabulary reserved for entity names.
  double name_share = 0.5;
  // Probability that an entity mention is preceded by a trigger word of its type.
  double trigger_probability = 0.9;
  std::size_t min_filler = 4;
  std::size_t max_filler = 12;
  std::size_t max_entities = 3;
};

Dataset synthesize_corpus(const SynthParams& params, std::string name = "synthetic");
Dataset synthesize_corpus(std::size_t n_sentences, std::size_t vocab_size,
                          const std::vector<std::string>& entity_types,
                          std::uint64_t seed);

// Splits one stream into two datasets; sentence i goes to the first when
// i < head. Handy for carving a train/test pair out of one synthetic stream.
std::pair<Dataset, Dataset> split_head(const Dataset& dataset, std::size_t head);

enum class CorruptionMode { kTypePermutation, kBoundaryShift, kSpanDrop };

std::string_view to_string(CorruptionMode mode);
CorruptionMode corruption_mode_from_string(std::string_view name);

struct CorruptionSpec {
  double fraction = 0.0;
  CorruptionMode mode = CorruptionMode::kTypePermutation;
  std::uint64_t seed = 0;
};

struct CorruptionResult {
  Dataset dataset;
  std::vector<std::size_t> corrupted;  // ascending sentence indices
};

std::size_t corruption_count(double fraction, std::size_t n_sentences);

CorruptionResult corrupt_labels(const Dataset& dataset, const CorruptionSpec& spec);

}  // namespace labelaudit::corpus

#endif  // LABELAUDIT_CORPUS_HPP_
