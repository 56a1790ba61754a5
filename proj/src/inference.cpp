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

#include <algorithm>
#include <cmath>
#include <limits>

#include "labelaudit/errors.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::tagger {

namespace {

double log_sum_exp(std::span<const double> v) {
  const double m = *std::ranges::max_element(v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// alpha(i, l): log-sum of all prefixes ending in label l at position i.
std::vector<double> forward_table(const Potentials& p) {
  const std::size_t n = p.length, L = p.num_labels;
  std::vector<double> alpha(n * L);
  std::vector<double> terms(L);
  for (std::size_t l = 0; l < L; ++l) alpha[l] = p.unary_at(0, l);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t q = 0; q < L; ++q) terms[q] = alpha[(i - 1) * L + q] + p.transition_at(q, l);
      alpha[i * L + l] = log_sum_exp(terms) + p.unary_at(i, l);
    }
  }
  return alpha;
}

// beta(i, l): log-sum of all suffixes after position i given label l there.
std::vector<double> backward_table(const Potentials& p) {
  const std::size_t n = p.length, L = p.num_labels;
  std::vector<double> beta(n * L, 0.0);
  std::vector<double> terms(L);
  for (std::size_t i = n - 1; i-- > 0;) {
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t q = 0; q < L; ++q)
        terms[q] = p.transition_at(l, q) + p.unary_at(i + 1, q) + beta[(i + 1) * L + q];
      beta[i * L + l] = log_sum_exp(terms);
    }
  }
  return beta;
}

}  // namespace

Potentials sentence_potentials(const CrfModel& model, const EncodedSentence& sentence) {
  const std::size_t L = model.num_labels();
  Potentials p(sentence.size(), L);
  const double* w = model.weights.data();
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    double* row = &p.unary[i * L];
    for (std::uint32_t a : sentence.attributes[i]) {
      const double* wa = w + static_cast<std::size_t>(a) * L;
      for (std::size_t l = 0; l < L; ++l) row[l] += wa[l];
    }
  }
  std::copy(model.weights.begin() + static_cast<std::ptrdiff_t>(model.emission_size()),
            model.weights.end(), p.transition.begin());
  return p;
}

Potentials sentence_potentials(const CrfModel& model, const Sentence& sentence) {
  return sentence_potentials(model, encode(model, sentence, false));
}

double path_score(const Potentials& p, std::span<const std::size_t> path) {
  double s = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    s += p.unary_at(i, path[i]);
    if (i > 0) s += p.transition_at(path[i - 1], path[i]);
  }
  return s;
}

double forward_log_partition(const Potentials& p) {
  if (p.length == 0) return 0.0;
  const auto alpha = forward_table(p);
  return log_sum_exp(std::span(alpha).subspan((p.length - 1) * p.num_labels, p.num_labels));
}

Marginals marginals(const Potentials& p) {
  const std::size_t n = p.length, L = p.num_labels;
  Marginals m;
  m.length = n;
  m.num_labels = L;
  if (n == 0) return m;
  const auto alpha = forward_table(p);
  const auto beta = backward_table(p);
  m.log_partition = log_sum_exp(std::span(alpha).subspan((n - 1) * L, L));
  const double log_z = m.log_partition;

  m.node.resize(n * L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < L; ++l)
      m.node[i * L + l] = std::exp(alpha[i * L + l] + beta[i * L + l] - log_z);
  }
  m.edge.resize(n > 1 ? (n - 1) * L * L : 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t q = 0; q < L; ++q) {
      for (std::size_t l = 0; l < L; ++l) {
        m.edge[(i * L + q) * L + l] =
            std::exp(alpha[i * L + q] + p.transition_at(q, l) + p.unary_at(i + 1, l) +
                     beta[(i + 1) * L + l] - log_z);
      }
    }
  }
  return m;
}

ViterbiPath viterbi(const Potentials& p) {
  const std::size_t n = p.length, L = p.num_labels;
  ViterbiPath out;
  if (n == 0) return out;
  std::vector<double> delta(n * L);
  std::vector<std::size_t> back(n * L, 0);
  for (std::size_t l = 0; l < L; ++l) delta[l] = p.unary_at(0, l);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t l = 0; l < L; ++l) {
      std::size_t best = 0;
      double best_score = delta[(i - 1) * L] + p.transition_at(0, l);
      for (std::size_t q = 1; q < L; ++q) {
        const double s = delta[(i - 1) * L + q] + p.transition_at(q, l);
        if (s > best_score) {
          best_score = s;
          best = q;
        }
      }
      delta[i * L + l] = best_score + p.unary_at(i, l);
      back[i * L + l] = best;
    }
  }
  std::size_t last = 0;
  for (std::size_t l = 1; l < L; ++l) {
    if (delta[(n - 1) * L + l] > delta[(n - 1) * L + last]) last = l;
  }
  out.score = delta[(n - 1) * L + last];
  out.labels.resize(n);
  out.labels[n - 1] = last;
  for (std::size_t i = n - 1; i > 0; --i) out.labels[i - 1] = back[i * L + out.labels[i]];
  return out;
}

namespace detail {

// Adds d/dw log p(gold) into `grad` (dense, model indexing) and returns the
// log-likelihood. Emission entries are only written for attributes active in
// the sentence.
double accumulate_gradient(const CrfModel& model, const EncodedSentence& s, std::span<double> grad) {
  const std::size_t L = model.num_labels();
  const Potentials p = sentence_potentials(model, s);
  const Marginals m = marginals(p);
  const double ll = path_score(p, s.gold) - m.log_partition;

  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::uint32_t a : s.attributes[i]) {
      double* g = grad.data() + static_cast<std::size_t>(a) * L;
      for (std::size_t l = 0; l < L; ++l) g[l] -= m.node_at(i, l);
      g[s.gold[i]] += 1.0;
    }
  }
  double* gt = grad.data() + model.emission_size();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    for (std::size_t q = 0; q < L; ++q) {
      for (std::size_t l = 0; l < L; ++l) gt[q * L + l] -= m.edge_at(i, q, l);
    }
    gt[s.gold[i] * L + s.gold[i + 1]] += 1.0;
  }
  return ll;
}

}  // namespace detail

LikelihoodGradient log_likelihood_grad(const CrfModel& model, const Sentence& sentence) {
  const EncodedSentence s = encode(model, sentence, true);
  LikelihoodGradient out;
  out.gradient.assign(model.weights.size(), 0.0);
  out.log_likelihood = detail::accumulate_gradient(model, s, out.gradient);
  return out;
}

double objective(const CrfModel& model, std::span<const EncodedSentence> data) {
  double ll = 0.0;
  for (const auto& s : data) {
    const Potentials p = sentence_potentials(model, s);
    ll += path_score(p, s.gold) - forward_log_partition(p);
  }
  double sq = 0.0;
  for (double w : model.weights) sq += w * w;
  return ll - 0.5 * model.config.l2 * sq;
}

}  // namespace labelaudit::tagger
