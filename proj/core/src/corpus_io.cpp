#include "pir/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pir/error.hpp"

namespace pir {
namespace {

using nlohmann::json;

std::string expect_line(std::istream& in, std::string_view what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kInvalidInput, "unexpected end of file while reading " + std::string(what));
  }
  return line;
}

void expect_header(std::istream& in, std::string_view magic, int version) {
  const auto line = expect_line(in, magic);
  std::istringstream ss(line);
  std::string got;
  int v = 0;
  if (!(ss >> got >> v) || got != magic) {
    throw Error(ErrorCode::kInvalidInput, "missing '" + std::string(magic) + "' header");
  }
  if (v != version) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(magic) + " version " + std::to_string(v) + " is not supported");
  }
}

std::size_t expect_count(std::istream& in, std::string_view key) {
  const auto line = expect_line(in, key);
  const auto tab = line.find('\t');
  if (tab == std::string::npos || line.substr(0, tab) != key) {
    throw Error(ErrorCode::kInvalidInput, "expected key '" + std::string(key) + "'");
  }
  try {
    return std::stoull(line.substr(tab + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidInput, "bad value for '" + std::string(key) + "'");
  }
}

}  // namespace

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  return out;
}

Corpus read_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = json::parse(line);
      Document doc;
      doc.id = rec.at("id").get<std::string>();
      doc.title = rec.value("title", std::string{});
      doc.text = rec.at("text").get<std::string>();
      if (rec.contains("topics")) doc.topics = rec.at("topics").get<std::vector<std::string>>();
      docs.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidInput, "corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Corpus(std::move(docs));
}

Corpus read_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus) {
    json rec = {{"id", doc.id}, {"title", doc.title}, {"text", doc.text}, {"topics", doc.topics}};
    out << rec.dump() << '\n';
  }
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  auto out = open_output(path);
  write_corpus(out, corpus);
}

void write_vocab(std::ostream& out, const Vocabulary& vocab) {
  out << "pir-vocab 1\n";
  out << "size\t" << vocab.size() << '\n';
  for (std::size_t i = 0; i < vocab.size(); ++i) out << i << '\t' << vocab.word(static_cast<WordId>(i)) << '\n';
}

Vocabulary read_vocab(std::istream& in) {
  expect_header(in, "pir-vocab", 1);
  const auto size = expect_count(in, "size");
  if (size < 2) throw Error(ErrorCode::kInvalidInput, "vocabulary must hold the reserved tokens");
  std::vector<std::string> words;
  words.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto line = expect_line(in, "vocabulary entry");
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.substr(0, tab) != std::to_string(i)) {
      throw Error(ErrorCode::kInvalidInput, "malformed vocabulary entry " + std::to_string(i));
    }
    words.push_back(line.substr(tab + 1));
  }
  if (words[Vocabulary::kUnk] != Vocabulary::kUnkToken || words[Vocabulary::kEos] != Vocabulary::kEosToken) {
    throw Error(ErrorCode::kInvalidInput, "vocabulary does not start with the reserved tokens");
  }
  words.erase(words.begin(), words.begin() + 2);
  return Vocabulary(std::move(words));
}

void write_stats(std::ostream& out, const CorpusStats& stats) {
  const auto words = stats.sorted_words();
  out << "pir-stats 1\n";
  out << "num_docs\t" << stats.num_docs() << '\n';
  out << "words\t" << words.size() << '\n';
  for (const auto& w : words) out << w << '\t' << stats.doc_freq(w) << '\n';
}

CorpusStats read_stats(std::istream& in) {
  expect_header(in, "pir-stats", 1);
  const auto num_docs = expect_count(in, "num_docs");
  const auto count = expect_count(in, "words");
  std::unordered_map<std::string, std::size_t> df;
  df.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto line = expect_line(in, "stats entry");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorCode::kInvalidInput, "malformed stats entry");
    df.emplace(line.substr(0, tab), std::stoull(line.substr(tab + 1)));
  }
  return CorpusStats(num_docs, std::move(df));
}

}  // namespace pir
