// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "xabsa/aspects.hpp"
#include "xabsa/classifier.hpp"
#include "xabsa/error.hpp"
#include "json.hpp"

using namespace xabsa;
using namespace xabsa::aspects;
using explain::Attribution;
using explain::ShapleyValues;
using inference::Polarity;

namespace {

corpus::AbstractDocument raw_document(const std::string& id, const std::string& text) {
  corpus::AbstractDocument d;
  d.source_id = id;
  d.text = text;
  d.sentences = corpus::segment_sentences(text);
  d.sentence_count = d.sentences.size();
  d.char_count = text.size();
  return d;
}

// Word-level attribution with phi chosen per lowercase word.
Attribution word_attribution(const corpus::AbstractDocument& doc,
                             const std::function<double(std::string_view)>& phi_of) {
  const auto seg = explain::word_segmentation(doc.text);
  ShapleyValues sv;
  for (const auto& s : seg.spans) {
    sv.phi.push_back(phi_of(s.of(doc.text)));
    sv.std_error.push_back(0.0);
  }
  auto a = explain::make_attribution(seg, sv);
  a.doc_id = doc.source_id;
  return a;
}

inference::LabelDistribution stars(std::string_view top) {
  auto spec = inference::make_spec("m", inference::Task::kOverallSentiment, "r");
  std::vector<double> scores(5, 0.05);
  for (std::size_t i = 0; i < 5; ++i) {
    if (spec.label_set[i] == top) scores[i] = 0.8;
  }
  return inference::make_distribution(spec, scores, "h");
}

ExtractParams params(double tau, std::size_t cap = 10) {
  ExtractParams p;
  p.tau_quantile = tau;
  p.max_candidates = cap;
  return p;
}

AspectSentiment aspect(std::string term, Polarity p) {
  AspectSentiment a;
  a.doc_id = "d";
  a.term = std::move(term);
  a.polarity = p;
  return a;
}

}  // namespace

TEST_CASE("token normalization") {
  CHECK(normalize_token("Models") == "model");
  CHECK(normalize_token("ChatGPT's") == "chatgpt");
  CHECK(normalize_token("class") == "class");
  CHECK(normalize_token("corpus") == "corpus");
  CHECK(normalize_token("analysis") == "analysis");
  CHECK(normalize_token("LLMs") == "llm");
  CHECK(normalize_token("has") == "has");
}

TEST_CASE("quantile") {
  CHECK(quantile({1, 2, 3, 4}, 0.75) == doctest::Approx(3.25));
  CHECK(quantile({5}, 0.3) == 5.0);
  CHECK(quantile({3, 1, 2}, 0.0) == 1.0);
  CHECK(quantile({3, 1, 2}, 1.0) == 3.0);
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
}

TEST_CASE("battery life example") {
  const auto doc = raw_document("d", "the battery life is poor and battery life is short");
  const auto a = word_attribution(doc, [](std::string_view w) {
    return w == "battery" || w == "life" ? 0.4 : 0.0;
  });
  const auto out = extract_aspects(doc, a);
  REQUIRE(out.size() == 3);
  CHECK(out[0].term == "battery life");
  CHECK(out[0].salience == doctest::Approx(1.6));
  CHECK(out[0].occurrences.size() == 2);
  CHECK(out[0].rank == 1);
  CHECK(out[1].term == "battery");
  CHECK(out[1].salience == doctest::Approx(0.8));
  CHECK(out[2].term == "life");
  CHECK(out[2].salience == doctest::Approx(0.8));
  CHECK(out[2].rank == 3);

  ExtractParams one;
  one.max_candidates = 1;
  CHECK(extract_aspects(doc, a, one).size() == 1);
  ExtractParams extra;
  extra.extra_stopwords = {"Battery"};
  const auto no_battery = extract_aspects(doc, a, extra);
  REQUIRE(no_battery.size() == 1);
  CHECK(no_battery[0].term == "life");
}

TEST_CASE("no positive attribution gives no aspects") {
  const auto doc = raw_document("d", "nothing positive about this sentence.");
  CHECK(extract_aspects(doc, word_attribution(doc, [](auto) { return 0.0; })).empty());
  CHECK(extract_aspects(doc, word_attribution(doc, [](auto) { return -0.2; })).empty());
}

TEST_CASE("bigrams need whitespace adjacency") {
  const auto doc = raw_document("d", "battery, life");
  const auto out = extract_aspects(doc, word_attribution(doc, [](auto) { return 0.5; }),
                                   params(0.0));
  for (const auto& c : out) CHECK(c.term.find(' ') == std::string::npos);
}

TEST_CASE("sentence spans share phi among their words") {
  const auto doc = raw_document("d", "Grading accuracy matters. It is low.");
  ShapleyValues sv{0, 0, {0.6, 0.1}, {0, 0}};
  auto a = explain::make_attribution({explain::Unit::kSentence, doc.sentences}, sv);
  const auto out = extract_aspects(doc, a, params(1.0));
  REQUIRE_FALSE(out.empty());
  CHECK(out[0].term == "grading accuracy");
  CHECK(out[0].salience == doctest::Approx(0.4));  // 0.2 mean, two tokens
  CHECK(std::none_of(out.begin(), out.end(), [](const auto& c) { return c.term == "low"; }));
}

TEST_CASE("misaligned or foreign attributions are rejected") {
  const auto doc = raw_document("d", "short text");
  Attribution a;
  a.values = {{{0, 99}, explain::Unit::kWord, 1.0, 0.0}};
  CHECK_THROWS_AS(extract_aspects(doc, a), ConfigError);
  auto b = word_attribution(doc, [](auto) { return 1.0; });
  b.doc_id = "other";
  CHECK_THROWS_AS(extract_aspects(doc, b), ConfigError);
}

TEST_CASE("extraction properties over random attributions") {
  const std::string title = testing::fixture_text("truthful_title.txt");
  const std::string body = testing::fixture_text("truthful_abstract.txt");
  corpus::PaperRecord r;
  r.arxiv_id = "2304.10513";
  r.title = title;
  r.abstract = body;
  r.categories = {"cs.CL"};
  const auto doc = corpus::build_document(r);
  const std::string lower = to_lower(doc.text);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    CAPTURE(trial);
    auto a = word_attribution(doc, [&](auto) { return u(rng); });
    const std::size_t cap = 1 + trial % 12;
    const auto out = extract_aspects(doc, a, params(0.5, cap));
    CHECK(out.size() <= cap);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i].rank == i + 1);
      if (i > 0) CHECK(out[i - 1].salience >= out[i].salience);
      // every occurrence points at text whose normalized form is the term
      for (const auto& occ : out[i].occurrences) {
        CHECK(occ.span.end <= doc.text.size());
        CHECK(lower.find(to_lower(occ.span.of(doc.text))) != std::string::npos);
      }
      const auto first_word = out[i].term.substr(0, out[i].term.find(' '));
      CHECK(lower.find(first_word) != std::string::npos);
    }

    // raising one kept word's phi never lowers its term's salience
    auto all = extract_aspects(doc, a, params(0.0, 1000));
    if (all.empty()) continue;
    const auto& target = all.back();
    const Span bump = target.occurrences.front().span;
    auto boosted = a;
    for (auto& v : boosted.values) {
      if (v.span.begin >= bump.begin && v.span.end <= bump.end) v.phi += 0.5;
    }
    const auto after = extract_aspects(doc, boosted, params(0.0, 1000));
    const auto it = std::find_if(after.begin(), after.end(),
                                 [&](const auto& c) { return c.term == target.term; });
    REQUIRE(it != after.end());
    CHECK(it->salience >= target.salience - 1e-12);
  }
}

TEST_CASE("aspect scoring with the lexicon model") {
  auto spec = inference::make_spec("synthetic/aspect-lexicon", inference::Task::kAspectSentiment,
                                   "builtin-1");
  inference::ClassifierSession session(std::make_shared<inference::LexiconClassifier>(
      spec, inference::builtin_aspect_lexicon()));
  const auto doc = raw_document(
      "d", "The grading is poor and inconsistent. The feedback is excellent and helpful.");
  const std::vector<std::string> terms = {"grading", "feedback", "weather"};
  const auto out = score_terms(doc, terms, session);
  REQUIRE(out.size() == 3);
  CHECK(out[0].polarity == Polarity::kNegative);
  CHECK(out[1].polarity == Polarity::kPositive);
  // an unmentioned aspect is judged on the whole text
  CHECK(out[2].distribution.entries == session.classify_aspect(doc.text, "ocean").entries);
  CHECK(out[0].salience == 0.0);
  CHECK(out[0].doc_id == "d");

  AspectCandidate c;
  c.term = "feedback";
  c.salience = 0.7;
  const auto scored = score_aspects(doc, std::vector<AspectCandidate>{c}, session);
  CHECK(scored[0].salience == 0.7);
  CHECK(scored[0].polarity == Polarity::kPositive);

  CHECK_THROWS_AS(score_terms(doc, std::vector<std::string>{}, session), ConfigError);
  CHECK_THROWS_AS(score_aspects(doc, std::vector<AspectCandidate>{}, session), ConfigError);
  CHECK_THROWS_AS(score_terms(doc, std::vector<std::string>{"ok", ""}, session),
                  BatchItemError);

  const auto j = nlohmann::json::parse(aspect_to_json(out[1]));
  CHECK(j["term"] == "feedback");
  CHECK(j["polarity"] == "Positive");
  CHECK(j["model_id"] == "synthetic/aspect-lexicon");
  CHECK(j["scores"].size() == 3);
}

TEST_CASE("divergence examples") {
  const std::vector<AspectSentiment> neg = {aspect("x", Polarity::kNegative)};
  const std::vector<AspectSentiment> pos = {aspect("x", Polarity::kPositive)};
  CHECK(detect_divergence(stars("3 stars"), neg)[0].divergent);
  CHECK_FALSE(detect_divergence(stars("4 stars"), pos)[0].divergent);
  CHECK_FALSE(detect_divergence(stars("1 star"), neg)[0].divergent);
  const auto f = detect_divergence(stars("5 stars"), neg)[0];
  CHECK(f.overall_star == "5 stars");
  CHECK(f.overall_polarity == Polarity::kPositive);
  CHECK(f.aspect_polarity == Polarity::kNegative);
  CHECK(detect_divergence(stars("2 stars"), std::vector<AspectSentiment>{}).empty());
}

TEST_CASE("divergence is elementwise and order preserving") {
  std::mt19937_64 rng(5);
  const Polarity ps[] = {Polarity::kNegative, Polarity::kNeutral, Polarity::kPositive};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AspectSentiment> in;
    for (int i = 0; i < 8; ++i) in.push_back(aspect("t" + std::to_string(i), ps[rng() % 3]));
    const auto overall = stars(inference::star_labels()[rng() % 5]);
    const auto base = detect_divergence(overall, in);
    std::vector<std::size_t> perm(in.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<AspectSentiment> shuffled;
    for (auto i : perm) shuffled.push_back(in[i]);
    const auto out = detect_divergence(overall, shuffled);
    for (std::size_t k = 0; k < perm.size(); ++k) CHECK(out[k] == base[perm[k]]);
    for (const auto& f : base) {
      CHECK(f.divergent == (f.overall_polarity != f.aspect_polarity));
    }
  }
}
