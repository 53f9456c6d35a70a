#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "irbl/corpus.hpp"
#include "irbl/tracescore.hpp"

namespace irbl {

enum class Language { java, python };

Language parse_language(std::string_view name);  // throws UnknownLanguage

// One preprocessed token field per structural facet of a source file.
struct CodeFields {
  std::vector<std::string> type_names;
  std::vector<std::string> method_names;
  std::vector<std::string> variable_names;
  std::vector<std::string> comments;
};

// Lexes declarations and comments out of source text. On an unparseable file
// (unterminated comment or string) falls back to plain identifier extraction
// with everything in variable_names.
CodeFields extract_fields(std::string_view content, Language language);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

enum class CodeField { type_names, method_names, variable_names, comments };
inline constexpr CodeField kCodeFields[] = {CodeField::type_names, CodeField::method_names,
                                            CodeField::variable_names, CodeField::comments};

// Four per-field BM25 indexes sharing one file id set.
class StructuredIndex {
public:
  // Throws Error(EmptyIndex) when files is empty.
  static StructuredIndex build(const std::map<std::string, CodeFields>& files);

  // BM25 (idf clamped at zero) of the query tokens against one field of one file.
  double bm25(const std::vector<std::string>& query_tokens, const std::string& file,
              CodeField field, const Bm25Params& params) const;

  // Adds every file's BM25 score for one field into acc (term-at-a-time).
  void accumulate(const std::vector<std::string>& query_tokens, CodeField field,
                  const Bm25Params& params, std::map<std::string, double>& acc) const;

  const std::vector<std::string>& files() const { return files_; }
  bool has_file(const std::string& file) const;

private:
  struct FieldStats {
    std::map<std::string, std::map<std::string, std::uint32_t>> tf;  // term -> file -> count
    std::map<std::string, std::uint32_t> doc_len;
    double avg_len = 0.0;
  };

  const FieldStats& stats(CodeField f) const { return fields_[static_cast<int>(f)]; }

  std::vector<std::string> files_;
  FieldStats fields_[4];
};

// Sum of the eight query-part x field BM25 scores (summary and description are
// separate query parts). Files absent from every posting keep score 0 and are
// omitted from the table.
ScoreTable structure_score(const IssueReport& query, const StructuredIndex& index,
                           const Bm25Params& params = {});

}  // namespace irbl
