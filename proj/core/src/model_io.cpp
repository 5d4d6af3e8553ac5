#include "planrec/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "planrec/error.hpp"

namespace planrec {
namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, std::size_t expected_rows, std::size_t dim,
                        const char* what) {
  if (!rows.is_array() || rows.size() != expected_rows) {
    fail(ErrorCode::kFormat, std::string(what) + ": expected " + std::to_string(expected_rows) + " rows");
  }
  Matrix m(expected_rows, dim);
  for (std::size_t r = 0; r < expected_rows; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || row.size() != dim) {
      fail(ErrorCode::kFormat, std::string(what) + ": row " + std::to_string(r) + " has wrong width");
    }
    auto out = m.row(r);
    for (std::size_t d = 0; d < dim; ++d) {
      if (!row[d].is_number()) fail(ErrorCode::kFormat, std::string(what) + ": non-numeric entry");
      out[d] = row[d].get<double>();
    }
  }
  return m;
}

}  // namespace

std::string model_to_json(const EmbeddingModel& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["dim"] = model.dim();
  doc["window"] = model.window();
  json vocab = json::array();
  const auto& v = model.vocabulary();
  for (ActionId id = 0; id < v.size(); ++id) {
    vocab.push_back({{"token", v.token(id)}, {"count", v.count(id)}});
  }
  doc["vocab"] = std::move(vocab);
  doc["input_vectors"] = matrix_to_json(model.input_vectors());
  doc["inner_vectors"] = matrix_to_json(model.inner_vectors());
  doc["paths"] = model.tree().paths();
  json codes = json::array();
  for (const auto& code : model.tree().codes()) {
    json row = json::array();
    for (auto s : code) row.push_back(static_cast<int>(s));
    codes.push_back(std::move(row));
  }
  doc["codes"] = std::move(codes);
  return doc.dump();
}

EmbeddingModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("model JSON: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      fail(ErrorCode::kFormat, "unsupported model format_version " + std::to_string(version));
    }
    const auto dim = doc.at("dim").get<std::size_t>();
    const auto window = doc.at("window").get<std::size_t>();

    Vocabulary vocab;
    for (const auto& entry : doc.at("vocab")) {
      const std::string token = entry.at("token").get<std::string>();
      if (vocab.find(token)) fail(ErrorCode::kFormat, "duplicate vocabulary token '" + token + "'");
      vocab.set_count(vocab.intern(token), entry.at("count").get<std::uint64_t>());
    }

    auto paths = doc.at("paths").get<std::vector<std::vector<HuffmanTree::NodeId>>>();
    std::vector<std::vector<HuffmanTree::Sign>> codes;
    for (const auto& row : doc.at("codes")) {
      std::vector<HuffmanTree::Sign> code;
      for (const auto& s : row) code.push_back(static_cast<HuffmanTree::Sign>(s.get<int>()));
      codes.push_back(std::move(code));
    }
    if (paths.size() != vocab.size()) fail(ErrorCode::kFormat, "paths must have one entry per token");
    HuffmanTree tree = HuffmanTree::from_paths(std::move(paths), std::move(codes));

    Matrix input = matrix_from_json(doc.at("input_vectors"), vocab.size(), dim, "input_vectors");
    Matrix inner = matrix_from_json(doc.at("inner_vectors"), tree.inner_count(), dim, "inner_vectors");
    return EmbeddingModel(std::move(vocab), std::move(tree), dim, window, std::move(input),
                          std::move(inner));
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("model JSON: ") + e.what());
  }
}

void save_model(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << model_to_json(model) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

EmbeddingModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string model_id(const EmbeddingModel& model) {
  // FNV-1a 64
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : model_to_json(model)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace planrec
