#include "pir/text.hpp"

namespace pir {

// Common English function words, tokenized with the library's own rule
// (contractions appear as their split halves, e.g. "don", "t").
const StopWords& StopWords::english() {
  static const StopWords list = [] {
    StopWords s({
        "a", "about", "above", "after", "again", "against", "ain", "all", "also", "am",
        "an", "and", "any", "are", "aren", "as", "at", "be", "because", "been",
        "before", "being", "below", "between", "both", "but", "by", "can", "could", "couldn",
        "d", "did", "didn", "do", "does", "doesn", "doing", "don", "down", "during",
        "each", "few", "for", "from", "further", "had", "hadn", "has", "hasn", "have",
        "haven", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
        "how", "i", "if", "in", "into", "is", "isn", "it", "its", "itself",
        "just", "ll", "m", "ma", "may", "me", "might", "more", "most", "must",
        "mustn", "my", "myself", "needn", "no", "nor", "not", "now", "o", "of",
        "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out",
        "over", "own", "re", "s", "same", "shall", "shan", "she", "should", "shouldn",
        "so", "some", "such", "t", "than", "that", "the", "their", "theirs", "them",
        "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
        "under", "until", "up", "us", "ve", "very", "was", "wasn", "we", "were",
        "weren", "what", "when", "where", "which", "while", "who", "whom", "why", "will",
        "with", "won", "would", "wouldn", "y", "you", "your", "yours", "yourself", "yourselves",
        "cannot", "via", "whether", "within", "without", "upon", "thus", "however", "yet", "onto",
        "per", "among", "amongst", "across",
    });
    s.version_ = "en-v1";
    return s;
  }();
  return list;
}

}  // namespace pir
