#include "pir/lm.hpp"

#include <algorithm>

#include "pir/text.hpp"

namespace pir {

void feed_words(ModelSession& session, const Vocabulary& vocab, std::span<const std::string> words) {
  for (const auto& w : words) session.feed(vocab.id(w));
}

std::vector<Candidate> top_candidates(std::span<const double> dist, const Vocabulary& vocab, std::size_t b,
                                      const std::function<bool(WordId)>& admit) {
  std::vector<Candidate> all;
  all.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const auto id = static_cast<WordId>(i);
    if (admit && !admit(id)) continue;
    all.push_back({id, dist[i]});
  }
  const auto better = [&vocab](const Candidate& a, const Candidate& b) {
    return a.prob != b.prob ? a.prob > b.prob : vocab.word(a.word) < vocab.word(b.word);
  };
  const auto k = std::min(b, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), better);
  all.resize(k);
  return all;
}

std::vector<WordId> token_stream(const Document& doc, const Vocabulary& vocab) {
  std::vector<WordId> ids;
  for (const auto& sentence : tokenize_sentences(doc.text)) {
    for (const auto& tok : sentence) ids.push_back(vocab.id(tok));
    ids.push_back(Vocabulary::kEos);
  }
  return ids;
}

std::vector<WordId> token_stream(const Corpus& corpus, const Vocabulary& vocab) {
  std::vector<WordId> ids;
  for (const auto& doc : corpus) {
    auto part = token_stream(doc, vocab);
    ids.insert(ids.end(), part.begin(), part.end());
  }
  return ids;
}

}  // namespace pir
