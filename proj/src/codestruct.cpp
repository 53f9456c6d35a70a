#include "irbl/codestruct.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "irbl/errors.hpp"
#include "irbl/util.hpp"

namespace irbl {

Language parse_language(std::string_view name) {
  std::string n = to_lower(name);
  if (n == "java") return Language::java;
  if (n == "python" || n == "py") return Language::python;
  throw Error(Errc::UnknownLanguage, std::string(name));
}

namespace {

struct ParseFailure {};

struct Token {
  std::string text;
  bool ident = false;
};

struct RawFields {
  std::vector<std::string> types;
  std::vector<std::string> methods;
  std::vector<std::string> variables;
  std::string comments;
};

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == '$';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

const std::set<std::string>& java_keywords() {
  static const std::set<std::string> kw = {
      "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class",
      "const", "continue", "default", "do", "double", "else", "enum", "extends", "false",
      "final", "finally", "float", "for", "goto", "if", "implements", "import", "instanceof",
      "int", "interface", "long", "native", "new", "null", "package", "permits", "private",
      "protected", "public", "record", "return", "sealed", "short", "static", "strictfp",
      "super", "switch", "synchronized", "this", "throw", "throws", "transient", "true",
      "try", "var", "void", "volatile", "while", "yield"};
  return kw;
}

const std::set<std::string>& python_keywords() {
  static const std::set<std::string> kw = {
      "False", "None", "True", "and", "as", "assert", "async", "await", "break", "case",
      "class", "continue", "def", "del", "elif", "else", "except", "finally", "for", "from",
      "global", "if", "import", "in", "is", "lambda", "match", "nonlocal", "not", "or",
      "pass", "raise", "return", "try", "while", "with", "yield"};
  return kw;
}

bool java_type_like(const Token& t) {
  if (t.text == ">" || t.text == "]") return true;
  if (!t.ident) return false;
  static const std::set<std::string> primitives = {"boolean", "byte", "char", "double", "float",
                                                   "int", "long", "short", "var", "void"};
  return !java_keywords().count(t.text) || primitives.count(t.text) > 0;
}

// --- Java -------------------------------------------------------------------

struct JavaLexer {
  std::string_view src;
  size_t i = 0;
  std::vector<Token> tokens;
  std::string comments;

  char peek(size_t off = 0) const { return i + off < src.size() ? src[i + off] : '\0'; }

  void lex() {
    while (i < src.size()) {
      char c = src[i];
      if (c == '/' && peek(1) == '/') {
        i += 2;
        size_t start = i;
        while (i < src.size() && src[i] != '\n') ++i;
        comments.append(src.substr(start, i - start));
        comments += ' ';
      } else if (c == '/' && peek(1) == '*') {
        i += 2;
        size_t start = i;
        size_t end = src.find("*/", i);
        if (end == std::string_view::npos) throw ParseFailure{};
        comments.append(src.substr(start, end - start));
        comments += ' ';
        i = end + 2;
      } else if (c == '"' && peek(1) == '"' && peek(2) == '"') {
        size_t end = src.find("\"\"\"", i + 3);
        if (end == std::string_view::npos) throw ParseFailure{};
        i = end + 3;
      } else if (c == '"' || c == '\'') {
        skip_quoted(c);
      } else if (is_ident_start(c)) {
        size_t start = i;
        while (i < src.size() && is_ident_char(src[i])) ++i;
        tokens.push_back({std::string(src.substr(start, i - start)), true});
      } else if (c >= '0' && c <= '9') {
        while (i < src.size() && (is_ident_char(src[i]) || src[i] == '.')) ++i;
        tokens.push_back({"0", false});
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else {
        tokens.push_back({std::string(1, c), false});
        ++i;
      }
    }
  }

  void skip_quoted(char quote) {
    ++i;
    while (i < src.size()) {
      if (src[i] == '\\') {
        i += 2;
        continue;
      }
      if (src[i] == quote) {
        ++i;
        return;
      }
      if (src[i] == '\n') break;  // unterminated on this line
      ++i;
    }
    throw ParseFailure{};
  }
};

RawFields lex_java(std::string_view src) {
  JavaLexer lx{src, 0, {}, {}};
  lx.lex();
  RawFields out;
  out.comments = std::move(lx.comments);
  const auto& toks = lx.tokens;
  auto at = [&](size_t idx) -> const Token& {
    static const Token none{"", false};
    return idx < toks.size() ? toks[idx] : none;
  };
  for (size_t t = 0; t < toks.size(); ++t) {
    const Token& tok = toks[t];
    if (tok.ident && (tok.text == "class" || tok.text == "interface" || tok.text == "enum" ||
                      tok.text == "record")) {
      const Token& name = at(t + 1);
      if (name.ident && !java_keywords().count(name.text)) out.types.push_back(name.text);
      continue;
    }
    if (!tok.ident || java_keywords().count(tok.text)) continue;
    const Token& prev = t > 0 ? toks[t - 1] : at(toks.size());
    const Token& next = at(t + 1);
    if (prev.text == "." || prev.text == "@") continue;
    if (!java_type_like(prev)) continue;
    if (next.text == "(") {
      out.methods.push_back(tok.text);
    } else if (next.text == ";" || next.text == "=" || next.text == "," || next.text == ")" ||
               next.text == ":") {
      out.variables.push_back(tok.text);
    }
  }
  return out;
}

// --- Python -----------------------------------------------------------------

struct PyLexer {
  std::string_view src;
  size_t i = 0;
  int bracket_depth = 0;
  std::vector<Token> tokens;
  std::string comments;

  char peek(size_t off = 0) const { return i + off < src.size() ? src[i + off] : '\0'; }

  bool last_significant_is_colon_or_none() const {
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
      if (it->text == "\n") continue;
      return it->text == ":";
    }
    return true;  // start of file
  }

  void lex() {
    while (i < src.size()) {
      char c = src[i];
      if (c == '#') {
        size_t start = ++i;
        while (i < src.size() && src[i] != '\n') ++i;
        comments.append(src.substr(start, i - start));
        comments += ' ';
      } else if (c == '"' || c == '\'') {
        lex_string(c);
      } else if (is_ident_start(c)) {
        size_t start = i;
        while (i < src.size() && is_ident_char(src[i])) ++i;
        std::string_view word = src.substr(start, i - start);
        // String prefixes like r"...", rb'...', f"..."
        if (word.size() <= 2 && (peek() == '"' || peek() == '\'') &&
            word.find_first_not_of("rbfuRBFU") == std::string_view::npos) {
          lex_string(peek());
          continue;
        }
        tokens.push_back({std::string(word), true});
      } else if (c >= '0' && c <= '9') {
        while (i < src.size() && (is_ident_char(src[i]) || src[i] == '.')) ++i;
        tokens.push_back({"0", false});
      } else if (c == '\n') {
        if (bracket_depth == 0 && !tokens.empty() && tokens.back().text != "\n")
          tokens.push_back({"\n", false});
        ++i;
      } else if (c == '\\' && peek(1) == '\n') {
        i += 2;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else {
        if (c == '(' || c == '[' || c == '{') ++bracket_depth;
        if ((c == ')' || c == ']' || c == '}') && bracket_depth > 0) --bracket_depth;
        if (std::string("=+-*/%<>!&|^~").find(c) != std::string::npos) {
          size_t start = i;
          while (i < src.size() &&
                 std::string("=+-*/%<>!&|^~").find(src[i]) != std::string::npos)
            ++i;
          tokens.push_back({std::string(src.substr(start, i - start)), false});
        } else {
          tokens.push_back({std::string(1, c), false});
          ++i;
        }
      }
    }
  }

  void lex_string(char quote) {
    const bool triple = peek() == quote && peek(1) == quote && peek(2) == quote;
    const bool docstring = triple && last_significant_is_colon_or_none();
    if (triple) {
      i += 3;
      size_t start = i;
      const std::string close(3, quote);
      size_t end = src.find(close, i);
      if (end == std::string_view::npos) throw ParseFailure{};
      if (docstring) {
        comments.append(src.substr(start, end - start));
        comments += ' ';
      }
      i = end + 3;
      return;
    }
    ++i;
    while (i < src.size()) {
      if (src[i] == '\\') {
        i += 2;
        continue;
      }
      if (src[i] == quote) {
        ++i;
        return;
      }
      if (src[i] == '\n') break;
      ++i;
    }
    throw ParseFailure{};
  }
};

RawFields lex_python(std::string_view src) {
  PyLexer lx{src, 0, 0, {}, {}};
  lx.lex();
  RawFields out;
  out.comments = std::move(lx.comments);
  const auto& toks = lx.tokens;
  auto text = [&](size_t idx) -> const std::string& {
    static const std::string none;
    return idx < toks.size() ? toks[idx].text : none;
  };
  for (size_t t = 0; t < toks.size(); ++t) {
    const Token& tok = toks[t];
    if (!tok.ident) continue;
    if (tok.text == "def" || tok.text == "class") {
      if (t + 1 < toks.size() && toks[t + 1].ident && !python_keywords().count(text(t + 1))) {
        auto& dest = tok.text == "def" ? out.methods : out.types;
        dest.push_back(text(t + 1));
        // Parameter list of a def.
        if (tok.text == "def" && text(t + 2) == "(") {
          int depth = 1;
          for (size_t p = t + 3; p < toks.size() && depth > 0; ++p) {
            if (text(p) == "(" || text(p) == "[") ++depth;
            else if (text(p) == ")" || text(p) == "]") --depth;
            else if (toks[p].ident && depth == 1 && !python_keywords().count(text(p)) &&
                     text(p) != "self" && text(p) != "cls") {
              const std::string& nxt = text(p + 1);
              if (nxt == "," || nxt == ")" || nxt == "=" || nxt == ":")
                out.variables.push_back(text(p));
            }
          }
        }
      }
      continue;
    }
    if (python_keywords().count(tok.text)) continue;
    const std::string& prev = t > 0 ? toks[t - 1].text : text(toks.size());
    const bool stmt_start = t == 0 || prev == "\n" || prev == ";";
    if (stmt_start && (text(t + 1) == "=" || text(t + 1) == ":"))
      out.variables.push_back(tok.text);
  }
  return out;
}

// Fallback for unparseable files: every identifier, no classification.
RawFields regex_identifiers(std::string_view src, Language lang) {
  const auto& kw = lang == Language::java ? java_keywords() : python_keywords();
  RawFields out;
  size_t i = 0;
  while (i < src.size()) {
    if (!is_ident_start(src[i])) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < src.size() && is_ident_char(src[i])) ++i;
    std::string word(src.substr(start, i - start));
    if (!kw.count(word)) out.variables.push_back(std::move(word));
  }
  return out;
}

std::vector<std::string> preprocess_idents(const std::vector<std::string>& idents) {
  std::string joined;
  for (const auto& id : idents) {
    joined += id;
    joined += ' ';
  }
  return preprocess(joined);
}

}  // namespace

CodeFields extract_fields(std::string_view content, Language language) {
  RawFields raw;
  try {
    raw = language == Language::java ? lex_java(content) : lex_python(content);
  } catch (const ParseFailure&) {
    raw = regex_identifiers(content, language);
  }
  CodeFields fields;
  fields.type_names = preprocess_idents(raw.types);
  fields.method_names = preprocess_idents(raw.methods);
  fields.variable_names = preprocess_idents(raw.variables);
  fields.comments = preprocess(raw.comments);
  return fields;
}

StructuredIndex StructuredIndex::build(const std::map<std::string, CodeFields>& files) {
  if (files.empty()) throw Error(Errc::EmptyIndex, "structured index needs at least one file");
  StructuredIndex idx;
  for (const auto& [path, fields] : files) {
    idx.files_.push_back(path);
    const std::vector<std::string>* lists[4] = {&fields.type_names, &fields.method_names,
                                                &fields.variable_names, &fields.comments};
    for (int f = 0; f < 4; ++f) {
      FieldStats& st = idx.fields_[f];
      st.doc_len[path] = static_cast<std::uint32_t>(lists[f]->size());
      for (const auto& term : *lists[f]) ++st.tf[term][path];
    }
  }
  const double n = static_cast<double>(idx.files_.size());
  for (auto& st : idx.fields_) {
    double total = 0.0;
    for (const auto& [path, len] : st.doc_len) total += len;
    st.avg_len = n > 0 ? total / n : 0.0;
  }
  return idx;
}

bool StructuredIndex::has_file(const std::string& file) const {
  return std::binary_search(files_.begin(), files_.end(), file);
}

namespace {

double bm25_idf(double n_docs, double df) {
  const double idf = std::log((n_docs - df + 0.5) / (df + 0.5));
  return idf > 0.0 ? idf : 0.0;  // clamped so scores stay nonnegative
}

}  // namespace

double StructuredIndex::bm25(const std::vector<std::string>& query_tokens, const std::string& file,
                             CodeField field, const Bm25Params& params) const {
  const FieldStats& st = stats(field);
  const double n = static_cast<double>(files_.size());
  auto len_it = st.doc_len.find(file);
  if (len_it == st.doc_len.end()) return 0.0;
  const double len_ratio = st.avg_len > 0.0 ? len_it->second / st.avg_len : 0.0;
  const double k_norm = params.k1 * (1.0 - params.b + params.b * len_ratio);

  std::map<std::string, int> qtf;
  for (const auto& t : query_tokens) ++qtf[t];

  double score = 0.0;
  for (const auto& [term, count] : qtf) {
    auto postings = st.tf.find(term);
    if (postings == st.tf.end()) continue;
    auto doc = postings->second.find(file);
    if (doc == postings->second.end()) continue;
    const double tf = doc->second;
    const double idf = bm25_idf(n, static_cast<double>(postings->second.size()));
    score += count * idf * tf * (params.k1 + 1.0) / (tf + k_norm);
  }
  return score;
}

void StructuredIndex::accumulate(const std::vector<std::string>& query_tokens, CodeField field,
                                 const Bm25Params& params,
                                 std::map<std::string, double>& acc) const {
  const FieldStats& st = stats(field);
  const double n = static_cast<double>(files_.size());
  std::map<std::string, int> qtf;
  for (const auto& t : query_tokens) ++qtf[t];
  for (const auto& [term, count] : qtf) {
    auto postings = st.tf.find(term);
    if (postings == st.tf.end()) continue;
    const double idf = bm25_idf(n, static_cast<double>(postings->second.size()));
    if (idf <= 0.0) continue;
    for (const auto& [file, raw_tf] : postings->second) {
      const double tf = raw_tf;
      const double len_ratio = st.avg_len > 0.0 ? st.doc_len.at(file) / st.avg_len : 0.0;
      const double k_norm = params.k1 * (1.0 - params.b + params.b * len_ratio);
      acc[file] += count * idf * tf * (params.k1 + 1.0) / (tf + k_norm);
    }
  }
}

ScoreTable structure_score(const IssueReport& query, const StructuredIndex& index,
                           const Bm25Params& params) {
  ScoreTable table;
  table.bug_id = query.id;
  const std::vector<std::string> parts[2] = {preprocess(query.summary),
                                             preprocess(query.description)};
  for (const auto& part : parts) {
    if (part.empty()) continue;
    for (CodeField field : kCodeFields) index.accumulate(part, field, params, table.scores);
  }
  return table;
}

}  // namespace irbl
