#include "irbl/textprep.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "irbl/csv.hpp"
#include "irbl/errors.hpp"
#include "irbl/util.hpp"

namespace irbl {

namespace {

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alnum(char c) { return is_upper(c) || is_lower(c) || is_digit(c); }

// Splits one alphanumeric run at camel-case and letter/digit boundaries:
// "NullPointerException" -> null pointer exception, "HTTPServer" -> http server,
// "utf8Codec" -> utf 8 codec.
void split_run(std::string_view run, std::vector<std::string>& out) {
  size_t start = 0;
  for (size_t i = 1; i <= run.size(); ++i) {
    bool boundary = i == run.size();
    if (!boundary) {
      char prev = run[i - 1];
      char cur = run[i];
      if (is_lower(prev) && is_upper(cur)) boundary = true;
      else if (is_digit(prev) != is_digit(cur)) boundary = true;
      else if (is_upper(prev) && is_upper(cur) && i + 1 < run.size() && is_lower(run[i + 1]))
        boundary = true;
    }
    if (boundary) {
      std::string tok;
      tok.reserve(i - start);
      for (size_t p = start; p < i; ++p)
        tok += static_cast<char>(std::tolower(static_cast<unsigned char>(run[p])));
      out.push_back(std::move(tok));
      start = i;
    }
  }
}

}  // namespace

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    if (!is_alnum(text[i])) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < text.size() && is_alnum(text[i])) ++i;
    split_run(text.substr(start, i - start), out);
  }
  return out;
}

std::vector<std::string> preprocess(std::string_view text) {
  std::vector<std::string> out;
  for (auto& tok : split_tokens(text)) {
    if (is_stop_word(tok)) continue;
    std::string stem = porter_stem(tok);
    if (!stem.empty()) out.push_back(std::move(stem));
  }
  return out;
}

double cosine(const SparseVec& a, const SparseVec& b) {
  double dot = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (a[i].first > b[j].first) ++j;
    else {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return dot;
}

VectorSpace VectorSpace::build(const std::map<std::string, std::vector<std::string>>& docs) {
  if (docs.empty()) throw Error(Errc::EmptyCorpus, "build_tfidf requires at least one document");
  VectorSpace vs;

  // Document frequencies over a deterministic (sorted) vocabulary.
  std::map<std::string, std::uint32_t> df;
  for (const auto& [id, tokens] : docs) {
    std::map<std::string, std::uint32_t> seen;
    for (const auto& t : tokens) ++seen[t];
    for (const auto& [t, _] : seen) ++df[t];
  }
  vs.terms_.reserve(df.size());
  for (const auto& [term, count] : df) {
    vs.vocab_.emplace(term, static_cast<std::uint32_t>(vs.terms_.size()));
    vs.terms_.push_back(term);
    vs.df_.push_back(count);
  }

  const double n = static_cast<double>(docs.size());
  vs.idf_.resize(vs.terms_.size());
  for (size_t t = 0; t < vs.terms_.size(); ++t)
    vs.idf_[t] = std::log((1.0 + n) / (1.0 + vs.df_[t])) + 1.0;

  for (const auto& [id, tokens] : docs) vs.doc_vectors_.emplace(id, vs.vectorize(tokens));
  return vs;
}

SparseVec VectorSpace::vectorize(const std::vector<std::string>& tokens) const {
  std::map<std::uint32_t, double> tf;
  for (const auto& t : tokens) {
    auto it = vocab_.find(t);
    if (it != vocab_.end()) tf[it->second] += 1.0;
  }
  SparseVec v;
  v.reserve(tf.size());
  double norm_sq = 0.0;
  for (const auto& [idx, count] : tf) {
    double w = count * idf_[idx];
    v.emplace_back(idx, w);
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [idx, w] : v) w *= inv;
  }
  return v;
}

const SparseVec& VectorSpace::doc_vector(const std::string& id) const {
  auto it = doc_vectors_.find(id);
  if (it == doc_vectors_.end())
    throw Error(Errc::InvariantViolation, "unknown document id: " + id);
  return it->second;
}

double VectorSpace::idf(const std::string& term) const {
  auto it = vocab_.find(term);
  if (it == vocab_.end()) return 0.0;
  return idf_[it->second];
}

void VectorSpace::export_idf_csv(const std::filesystem::path& p) const {
  std::string out = "term,df,idf\n";
  for (size_t t = 0; t < terms_.size(); ++t) {
    std::ostringstream row;
    row << terms_[t] << ',' << df_[t] << ',' << idf_[t] << '\n';
    out += row.str();
  }
  atomic_write_file(p, out);
}

}  // namespace irbl
