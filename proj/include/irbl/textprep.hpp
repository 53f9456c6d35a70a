#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace irbl {

// Lowercase Porter stem (published 1980 algorithm). Input must already be lowercase.
std::string porter_stem(std::string_view word);

// Frozen English stop-word list, committed in src/stopwords.cpp.
bool is_stop_word(std::string_view lower_token);

// Splits raw text into identifier-style tokens: alphanumeric runs, then camel-case
// and letter/digit boundaries, lowercased. No stop-word or stemming pass.
std::vector<std::string> split_tokens(std::string_view text);

// Full pipeline: split -> lowercase -> stop-word removal -> Porter stemming.
std::vector<std::string> preprocess(std::string_view text);

// Sparse vector over a VectorSpace vocabulary; indices strictly increasing.
using SparseVec = std::vector<std::pair<std::uint32_t, double>>;

double cosine(const SparseVec& a, const SparseVec& b);

class VectorSpace {
public:
  // tf = raw count, idf = ln((1+N)/(1+df)) + 1, vectors L2-normalized.
  // Throws Error(EmptyCorpus) when docs is empty.
  static VectorSpace build(const std::map<std::string, std::vector<std::string>>& docs);

  const SparseVec& doc_vector(const std::string& id) const;
  bool has_doc(const std::string& id) const { return doc_vectors_.count(id) > 0; }

  // Projects arbitrary tokens onto the vocabulary (unknown terms dropped).
  SparseVec vectorize(const std::vector<std::string>& tokens) const;

  double idf(const std::string& term) const;
  std::size_t vocabulary_size() const { return terms_.size(); }
  std::size_t doc_count() const { return doc_vectors_.size(); }

  // Debug export: term,df,idf rows.
  void export_idf_csv(const std::filesystem::path& p) const;

private:
  std::map<std::string, std::uint32_t> vocab_;
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> df_;
  std::vector<double> idf_;
  std::map<std::string, SparseVec> doc_vectors_;
};

}  // namespace irbl
