#include "pir/synth.hpp"

#include <random>
#include <string>

#include "pir/error.hpp"

namespace pir {
namespace {

std::discrete_distribution<std::size_t> zipf(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / static_cast<double>(r + 1);
  return {w.begin(), w.end()};
}

std::string numbered(const char* prefix, std::size_t i, int width) {
  auto digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

}  // namespace

Corpus synth_corpus(const SynthConfig& config) {
  if (config.topics == 0 || config.docs_per_topic == 0 || config.vocab_size == 0 || config.doc_length == 0 ||
      config.sentence_length == 0) {
    throw Error(ErrorCode::kInvalidParameter, "synthetic corpus counts must all be at least 1");
  }
  if (!(config.topic_mass >= 0.0 && config.topic_mass <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "topic_mass must lie in [0, 1]");
  }
  const std::size_t block = config.vocab_size / (2 * config.topics);
  const std::size_t tail_start = block * config.topics;
  const std::size_t tail = config.vocab_size - tail_start;
  if (block == 0 || tail == 0) {
    throw Error(ErrorCode::kInvalidParameter, "vocabulary too small for the requested number of topics");
  }
  const int width = static_cast<int>(std::to_string(config.vocab_size - 1).size());
  std::vector<std::string> words(config.vocab_size);
  for (std::size_t i = 0; i < words.size(); ++i) words[i] = numbered("w", i, std::max(width, 3));

  std::mt19937_64 rng(config.seed);
  auto block_dist = zipf(block);
  auto tail_dist = zipf(tail);
  std::bernoulli_distribution from_topic(config.topic_mass);

  const std::size_t total = config.topics * config.docs_per_topic;
  const int id_width = std::max(4, static_cast<int>(std::to_string(total - 1).size()));
  std::vector<Document> docs;
  docs.reserve(total);
  for (std::size_t t = 0; t < config.topics; ++t) {
    for (std::size_t i = 0; i < config.docs_per_topic; ++i) {
      Document doc;
      doc.id = numbered("doc", docs.size(), id_width);
      doc.title = "Topic " + std::to_string(t) + " document " + std::to_string(i);
      doc.topics = {"topic" + std::to_string(t)};
      for (std::size_t k = 0; k < config.doc_length; ++k) {
        const std::size_t w =
            from_topic(rng) ? t * block + block_dist(rng) : tail_start + tail_dist(rng);
        if (k > 0) doc.text += (k % config.sentence_length == 0) ? ". " : " ";
        doc.text += words[w];
      }
      doc.text += '.';
      docs.push_back(std::move(doc));
    }
  }
  return Corpus(std::move(docs));
}

}  // namespace pir
