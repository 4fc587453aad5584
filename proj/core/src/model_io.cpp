#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "pir/corpus_io.hpp"
#include "pir/error.hpp"
#include "pir/lm.hpp"
#include "pir/lstm.hpp"
#include "pir/ngram.hpp"

namespace pir {

void save_model(std::ostream& out, const NextWordModel& model) {
  out << "pir-model 1\n";
  out << "type\t" << model.kind() << '\n';
  write_vocab(out, model.vocab());
  model.save(out);
}

std::unique_ptr<NextWordModel> load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "pir-model 1") {
    throw Error(ErrorCode::kInvalidInput, "not a pir model file (missing 'pir-model 1' header)");
  }
  if (!std::getline(in, line) || line.rfind("type\t", 0) != 0) {
    throw Error(ErrorCode::kInvalidInput, "model file: missing type line");
  }
  const auto kind = line.substr(5);
  auto vocab = read_vocab(in);
  if (kind == "ngram") return std::make_unique<NGramModel>(NGramModel::load(in, std::move(vocab)));
  if (kind == "lstm") return std::make_unique<LstmModel>(LstmModel::load(in, std::move(vocab)));
  throw Error(ErrorCode::kInvalidInput, "unknown model type '" + kind + "'");
}

std::unique_ptr<NextWordModel> load_model_file(const std::string& path) {
  auto in = open_input(path);
  return load_model(in);
}

void save_model_file(const NextWordModel& model, const std::string& path) {
  auto out = open_output(path);
  save_model(out, model);
  if (!out) throw Error(ErrorCode::kIo, "failed writing model to '" + path + "'");
}

}  // namespace pir
