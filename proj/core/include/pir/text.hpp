#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pir {

// Lowercases ASCII letters and splits on every byte that is not an ASCII
// letter or digit. Empty tokens are never produced.
std::vector<std::string> tokenize(std::string_view text);

// Same token rule, grouped into sentences terminated by '.', '!' or '?'.
// Sentences without tokens are dropped.
std::vector<std::vector<std::string>> tokenize_sentences(std::string_view text);

// Stop-word list used by every expander. Lookup is on lowercase tokens.
class StopWords {
 public:
  // The list shipped with the library ("en-v1", 174 words).
  static const StopWords& english();

  StopWords() = default;
  explicit StopWords(std::vector<std::string> words);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }
  const std::string& version() const { return version_; }

 private:
  std::vector<std::string> words_;  // sorted, unique
  std::string version_ = "custom";
};

}  // namespace pir
