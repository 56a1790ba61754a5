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

#include "labelaudit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "labelaudit/errors.hpp"

namespace labelaudit::corpus {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::vector<std::string_view> split_columns(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    cols.push_back(line.substr(i, j - i));
    i = j;
  }
  return cols;
}

}  // namespace

std::vector<std::string> Sentence::labels() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.label);
  return out;
}

Dataset::Dataset(std::vector<Sentence> sentences, std::string name)
    : sentences_(std::move(sentences)), name_(std::move(name)) {
  for (std::size_t s = 0; s < sentences_.size(); ++s) {
    const Sentence& sentence = sentences_[s];
    if (sentence.tokens.empty())
      throw DataError("sentence " + std::to_string(s) + " has no tokens");
    for (const auto& tok : sentence.tokens) {
      if (tok.text.empty() || std::ranges::any_of(tok.text, is_space))
        throw DataError("sentence " + std::to_string(s) +
                        ": token text must be non-empty and whitespace-free");
    }
    const auto labels = sentence.labels();
    try {
      validate_bio2(labels);
    } catch (const TagError& e) {
      throw DataError("sentence " + std::to_string(s) + ": " + e.what());
    }
    for (const auto& l : labels) {
      if (l != kOutside) alphabet_.emplace(tag_type(l));
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices, std::string name) const {
  std::vector<Sentence> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(sentences_.at(i));
  return Dataset(std::move(out), std::move(name));
}

bool is_well_formed_tag(std::string_view tag) {
  if (tag == kOutside) return true;
  if (tag.size() < 3 || tag[1] != '-') return false;
  return tag[0] == 'B' || tag[0] == 'I';
}

char tag_prefix(std::string_view tag) { return tag == kOutside ? 'O' : tag[0]; }

std::string_view tag_type(std::string_view tag) {
  return tag == kOutside ? std::string_view{} : tag.substr(2);
}

void validate_bio2(std::span<const std::string> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string& tag = labels[i];
    if (!is_well_formed_tag(tag)) throw TagError(i, "malformed tag '" + tag + "'");
    if (tag_prefix(tag) != 'I') continue;
    if (i == 0) throw TagError(i, "sentence starts with '" + tag + "'");
    const std::string& prev = labels[i - 1];
    if (prev == kOutside || tag_type(prev) != tag_type(tag))
      throw TagError(i, "'" + tag + "' follows '" + prev + "'");
  }
}

bool is_valid_bio2(std::span<const std::string> labels) {
  try {
    validate_bio2(labels);
    return true;
  } catch (const TagError&) {
    return false;
  }
}

std::vector<std::string> normalize_iob1(std::span<const std::string> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!is_well_formed_tag(labels[i]))
      throw TagError(i, "malformed tag '" + labels[i] + "'");
  }
  return repair_bio2(labels);
}

std::vector<std::string> repair_bio2(std::span<const std::string> labels) {
  std::vector<std::string> out(labels.begin(), labels.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == kOutside || out[i].size() < 3 || out[i][0] != 'I') continue;
    const bool opens = i == 0 || out[i - 1] == kOutside ||
                       tag_type(out[i - 1]) != tag_type(out[i]);
    if (opens) out[i][0] = 'B';
  }
  return out;
}

std::vector<Span> extract_spans(std::span<const std::string> labels) {
  validate_bio2(labels);
  std::vector<Span> spans;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (tag_prefix(labels[i]) != 'B') continue;
    std::size_t j = i + 1;
    while (j < labels.size() && tag_prefix(labels[j]) == 'I') ++j;
    spans.push_back({i, j, std::string(tag_type(labels[i]))});
    i = j - 1;
  }
  return spans;
}

std::vector<std::string> render_spans(std::span<const Span> spans, std::size_t length) {
  std::vector<std::string> out(length, std::string(kOutside));
  for (const auto& s : spans) {
    if (s.start >= s.end || s.end > length)
      throw DataError("span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                      ") out of range for length " + std::to_string(length));
    out[s.start] = "B-" + s.entity_type;
    for (std::size_t i = s.start + 1; i < s.end; ++i) out[i] = "I-" + s.entity_type;
  }
  return out;
}

Dataset parse_conll(std::string_view text, ConllColumns columns, std::string name) {
  std::vector<Sentence> sentences;
  std::vector<std::size_t> first_lines;
  Sentence current;
  std::size_t current_first_line = 0;
  std::optional<std::string> doc;
  std::size_t doc_count = 0;

  auto flush = [&] {
    if (current.tokens.empty()) return;
    current.doc_id = doc;
    sentences.push_back(std::move(current));
    first_lines.push_back(current_first_line);
    current = Sentence{};
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto cols = split_columns(line);
    if (cols.empty()) {
      flush();
      continue;
    }
    if (cols[0] == "-DOCSTART-") {
      flush();
      doc = "doc" + std::to_string(doc_count++);
      continue;
    }
    const std::size_t tag_col = columns.tag.value_or(cols.size() - 1);
    const std::size_t needed = std::max(columns.token, tag_col) + 1;
    if (cols.size() < needed || cols.size() < 2)
      throw ParseError(line_no, "expected at least " + std::to_string(std::max<std::size_t>(needed, 2)) +
                                    " columns, found " + std::to_string(cols.size()));
    const std::string_view tag = cols[tag_col];
    if (!is_well_formed_tag(tag))
      throw ParseError(line_no, "malformed tag '" + std::string(tag) + "'");
    if (current.tokens.empty()) current_first_line = line_no;
    current.tokens.push_back({std::string(cols[columns.token]), std::string(tag)});
  }
  flush();

  for (std::size_t s = 0; s < sentences.size(); ++s) {
    auto labels = repair_bio2(sentences[s].labels());
    for (std::size_t i = 0; i < labels.size(); ++i)
      sentences[s].tokens[i].label = std::move(labels[i]);
  }
  return Dataset(std::move(sentences), std::move(name));
}

Dataset read_conll_file(const std::string& path, ConllColumns columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_conll(buf.str(), columns, path);
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string serialize_conll(const Dataset& dataset) {
  std::string out;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    if (s > 0) out += '\n';
    for (const auto& t : dataset[s].tokens) {
      out += t.text;
      out += ' ';
      out += t.label;
      out += '\n';
    }
  }
  return out;
}

std::pair<Dataset, Dataset> split_head(const Dataset& dataset, std::size_t head) {
  head = std::min(head, dataset.size());
  std::vector<Sentence> a(dataset.sentences().begin(), dataset.sentences().begin() + head);
  std::vector<Sentence> b(dataset.sentences().begin() + head, dataset.sentences().end());
  return {Dataset(std::move(a), dataset.name() + ":head"),
          Dataset(std::move(b), dataset.name() + ":tail")};
}

}  // namespace labelaudit::corpus
