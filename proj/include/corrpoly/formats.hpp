#pragma once

// Text formats for matrices, X3C / FCC instances and clique families, plus the
// JSON certificate document emitted by the command-line tool.
//
//   matrix:   n, then n lines of n rationals (`a` or `a/b`), optionally followed
//             by a line `threshold = <rational>`
//   x3c:      `3q m`, then m lines of three elements in 1..3q
//   fcc:      `|V| |E| t`, then |E| lines `i j`
//   cliques:  `n m`, then m lines, each a vertex list in 1..n
//
// Writers emit the canonical form: single spaces, one trailing newline per line.
// Reading a canonical file and writing it back reproduces it byte for byte.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corrpoly/error.hpp"
#include "corrpoly/exactnum.hpp"
#include "corrpoly/generators.hpp"
#include "corrpoly/hulls.hpp"
#include "corrpoly/reductions.hpp"
#include "corrpoly/structured.hpp"

namespace corrpoly {

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

struct Line {
  std::size_t number = 0;  // 1-based
  std::string text;
  std::vector<Token> tokens;
};

// Non-blank lines with whitespace-separated tokens.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      if (raw.find_first_not_of(" \t") == std::string::npos) continue;
      lines_.push_back(Line{number, raw, {}});
    }
    // Tokens view into line text, so split only once the vector is final.
    for (auto& line : lines_) {
      std::string_view s(line.text);
      std::size_t i = 0;
      while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) line.tokens.push_back({s.substr(start, i - start), start + 1});
      }
    }
  }

  bool done() const { return next_ >= lines_.size(); }

  const Line& next(const char* expecting) {
    if (done()) fail_at(lines_.empty() ? 1 : lines_.back().number + 1, 1, std::string("missing ") + expecting);
    return lines_[next_++];
  }

  [[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string& msg) const {
    throw Error(ErrorCode::ParseError, source_ + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
  }

  [[noreturn]] void fail(const Line& line, const Token& tok, const std::string& msg) const {
    fail_at(line.number, tok.column, msg);
  }

  std::size_t integer(const Line& line, const Token& tok) const {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
      fail(line, tok, "expected a nonnegative integer, got '" + std::string(tok.text) + "'");
    }
    return v;
  }

  Rational rational(const Line& line, const Token& tok) const {
    try {
      return parse_rational(tok.text);
    } catch (const Error& e) {
      fail(line, tok, e.message());
    }
  }

  void expect_count(const Line& line, std::size_t count, const char* what) const {
    if (line.tokens.size() != count) {
      fail_at(line.number, line.tokens.empty() ? 1 : line.tokens.front().column,
              std::string("expected ") + std::to_string(count) + " " + what + ", found " +
                  std::to_string(line.tokens.size()));
    }
  }

 private:
  std::string source_;
  std::vector<Line> lines_;
  std::size_t next_ = 0;
};

}  // namespace detail

struct MatrixFile {
  RationalMatrix matrix;
  std::optional<Rational> threshold;
};

inline MatrixFile read_matrix(std::istream& in, const std::string& source = "<matrix>") {
  detail::LineReader r(in, source);
  const auto& head = r.next("dimension line");
  r.expect_count(head, 1, "value (the dimension)");
  const std::size_t n = r.integer(head, head.tokens[0]);
  if (n == 0) r.fail(head, head.tokens[0], "dimension must be positive");
  MatrixFile file{RationalMatrix(n), std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = r.next("matrix row");
    r.expect_count(row, n, "entries");
    for (std::size_t j = 0; j < n; ++j) file.matrix(i, j) = r.rational(row, row.tokens[j]);
  }
  if (!r.done()) {
    const auto& extra = r.next("threshold");
    if (extra.tokens.size() != 3 || extra.tokens[0].text != "threshold" || extra.tokens[1].text != "=") {
      r.fail(extra, extra.tokens[0], "expected 'threshold = <rational>' or end of file");
    }
    file.threshold = r.rational(extra, extra.tokens[2]);
    if (!r.done()) {
      const auto& more = r.next("end of file");
      r.fail(more, more.tokens[0], "unexpected content after threshold line");
    }
  }
  return file;
}

inline void write_matrix(std::ostream& out, const RationalMatrix& m, const std::optional<Rational>& threshold = {}) {
  out << m.dim() << '\n';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out << (j ? " " : "") << to_string(m(i, j));
    out << '\n';
  }
  if (threshold) out << "threshold = " << to_string(*threshold) << '\n';
}

inline X3CInstance read_x3c(std::istream& in, const std::string& source = "<x3c>") {
  detail::LineReader r(in, source);
  const auto& head = r.next("header '3q m'");
  r.expect_count(head, 2, "values (3q m)");
  X3CInstance inst;
  inst.universe_size = r.integer(head, head.tokens[0]);
  const std::size_t m = r.integer(head, head.tokens[1]);
  for (std::size_t t = 0; t < m; ++t) {
    const auto& line = r.next("triple");
    r.expect_count(line, 3, "elements");
    std::array<std::size_t, 3> tri{};
    for (std::size_t e = 0; e < 3; ++e) {
      tri[e] = r.integer(line, line.tokens[e]);
      if (tri[e] < 1 || tri[e] > inst.universe_size) r.fail(line, line.tokens[e], "element outside 1..3q");
    }
    inst.triples.push_back(tri);
  }
  if (!r.done()) {
    const auto& extra = r.next("end of file");
    r.fail(extra, extra.tokens[0], "more triples than declared");
  }
  return inst;
}

inline void write_x3c(std::ostream& out, const X3CInstance& inst) {
  out << inst.universe_size << ' ' << inst.triples.size() << '\n';
  for (const auto& t : inst.triples) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

inline FCCInstance read_fcc(std::istream& in, const std::string& source = "<fcc>") {
  detail::LineReader r(in, source);
  const auto& head = r.next("header '|V| |E| t'");
  r.expect_count(head, 3, "values (|V| |E| t)");
  FCCInstance inst;
  inst.vertex_count = r.integer(head, head.tokens[0]);
  const std::size_t m = r.integer(head, head.tokens[1]);
  inst.budget = r.rational(head, head.tokens[2]);
  for (std::size_t e = 0; e < m; ++e) {
    const auto& line = r.next("edge");
    r.expect_count(line, 2, "endpoints");
    std::size_t a = r.integer(line, line.tokens[0]);
    std::size_t b = r.integer(line, line.tokens[1]);
    if (a < 1 || a > inst.vertex_count) r.fail(line, line.tokens[0], "vertex outside 1..|V|");
    if (b < 1 || b > inst.vertex_count) r.fail(line, line.tokens[1], "vertex outside 1..|V|");
    inst.edges.emplace_back(a, b);
  }
  if (!r.done()) {
    const auto& extra = r.next("end of file");
    r.fail(extra, extra.tokens[0], "more edges than declared");
  }
  return inst;
}

inline void write_fcc(std::ostream& out, const FCCInstance& inst) {
  out << inst.vertex_count << ' ' << inst.edges.size() << ' ' << to_string(inst.budget) << '\n';
  for (auto [a, b] : inst.edges) out << a << ' ' << b << '\n';
}

inline CliqueFamily read_cliques(std::istream& in, const std::string& source = "<cliques>") {
  detail::LineReader r(in, source);
  const auto& head = r.next("header 'n m'");
  r.expect_count(head, 2, "values (n m)");
  const std::size_t n = r.integer(head, head.tokens[0]);
  const std::size_t m = r.integer(head, head.tokens[1]);
  if (n == 0 || n > 64) r.fail(head, head.tokens[0], "vertex count must be in 1..64");
  std::vector<std::vector<std::size_t>> lists;
  for (std::size_t c = 0; c < m; ++c) {
    const auto& line = r.next("clique");
    std::vector<std::size_t> l;
    for (const auto& tok : line.tokens) {
      std::size_t v = r.integer(line, tok);
      if (v < 1 || v > n) r.fail(line, tok, "vertex outside 1..n");
      l.push_back(v - 1);
    }
    lists.push_back(std::move(l));
  }
  if (!r.done()) {
    const auto& extra = r.next("end of file");
    r.fail(extra, extra.tokens[0], "more cliques than declared");
  }
  return CliqueFamily::from_lists(n, lists);
}

inline void write_cliques(std::ostream& out, const CliqueFamily& family) {
  out << family.n << ' ' << family.cliques.size() << '\n';
  for (auto c : family.cliques) {
    bool first = true;
    for (auto v : mask_vertices(c)) {
      out << (first ? "" : " ") << v + 1;
      first = false;
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Certificate documents

enum class Answer { Yes, No, NotMember };

inline std::string_view answer_name(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::NotMember: return "not-member";
  }
  return "?";
}

struct CertificateDocument {
  std::string command;  // membership | rank | relaxed-rank | poly
  HullFamily family = HullFamily::CorrCone;
  std::size_t n = 0;
  std::optional<Rational> rho;
  std::optional<Rational> threshold;
  Answer answer = Answer::No;
  std::optional<Rational> value;
  std::optional<DecompositionCertificate> terms;
  std::vector<std::string> screen_failures;
};

inline nlohmann::ordered_json to_json(const CertificateDocument& doc) {
  nlohmann::ordered_json problem;
  problem["command"] = doc.command;
  problem["family"] = std::string(family_name(doc.family));
  problem["n"] = doc.n;
  if (doc.rho) problem["rho"] = to_string(*doc.rho);
  if (doc.threshold) problem["threshold"] = to_string(*doc.threshold);
  nlohmann::ordered_json j;
  j["problem"] = problem;
  j["answer"] = std::string(answer_name(doc.answer));
  if (doc.value) j["value"] = to_string(*doc.value);
  j["generators"] = generator_kind(doc.family) == GeneratorKind::Boolean ? "boolean" : "cut";
  auto terms = nlohmann::ordered_json::array();
  if (doc.terms) {
    for (const auto& [k, w] : doc.terms->weights) {
      nlohmann::ordered_json t;
      t["k"] = k;
      t["bits"] = bit_string(GeneratorId(doc.n, k));
      t["weight"] = to_string(w);
      terms.push_back(t);
    }
  }
  j["terms"] = terms;
  if (!doc.screen_failures.empty()) j["screen_failures"] = doc.screen_failures;
  return j;
}

inline std::string serialize(const CertificateDocument& doc) { return to_json(doc).dump(2) + "\n"; }

inline CertificateDocument parse_document(const std::string& text) {
  CertificateDocument doc;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& p = j.at("problem");
    doc.command = p.at("command").get<std::string>();
    auto fam = parse_family(p.at("family").get<std::string>());
    if (!fam) throw Error(ErrorCode::ParseError, "unknown family in certificate");
    doc.family = *fam;
    doc.n = p.at("n").get<std::size_t>();
    if (p.contains("rho")) doc.rho = parse_rational(p.at("rho").get<std::string>());
    if (p.contains("threshold")) doc.threshold = parse_rational(p.at("threshold").get<std::string>());
    const auto ans = j.at("answer").get<std::string>();
    if (ans == "yes") {
      doc.answer = Answer::Yes;
    } else if (ans == "no") {
      doc.answer = Answer::No;
    } else if (ans == "not-member") {
      doc.answer = Answer::NotMember;
    } else {
      throw Error(ErrorCode::ParseError, "unknown answer '" + ans + "'");
    }
    if (j.contains("value")) doc.value = parse_rational(j.at("value").get<std::string>());
    const GeneratorKind kind = generator_kind(doc.family);
    const auto& terms = j.at("terms");
    if (!terms.empty()) {
      if (doc.n == 0 || doc.n > kHardMaxDim) throw Error(ErrorCode::ParseError, "certificate dimension out of range");
      DecompositionCertificate cert{doc.n, kind, {}};
      for (const auto& t : terms) {
        const auto k = t.at("k").get<std::uint64_t>();
        const GeneratorId id(doc.n, k);
        if (t.at("bits").get<std::string>() != bit_string(id)) {
          throw Error(ErrorCode::InvalidCertificate, "bits of term k=" + std::to_string(k) + " do not match k");
        }
        if (!cert.weights.emplace(k, parse_rational(t.at("weight").get<std::string>())).second) {
          throw Error(ErrorCode::InvalidCertificate, "duplicate term k=" + std::to_string(k));
        }
      }
      doc.terms = std::move(cert);
    }
    if (j.contains("screen_failures")) doc.screen_failures = j.at("screen_failures").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("certificate document: ") + e.what());
  }
  return doc;
}

/// Independent re-check of a document against its input matrix. Returns an empty
/// string when valid, otherwise the reason.
inline std::string verify_document(const CertificateDocument& doc, const RationalMatrix& m) {
  if (doc.answer != Answer::Yes) return "document carries no positive answer";
  if (!doc.terms) {
    if (m.dim() != doc.n) return "dimension mismatch";
    // An empty decomposition is valid only for the zero matrix of a cone.
    if (!(m == RationalMatrix::zero(m.dim())) || is_polytope(doc.family)) return "no terms";
    if (doc.value && *doc.value != 0) return "value differs from the empty decomposition";
    return {};
  }
  HullSpec spec;
  try {
    spec = HullSpec(doc.family, doc.family == HullFamily::ScaledCorrPolytope ? doc.rho : std::nullopt);
  } catch (const Error& e) {
    return e.what();
  }
  if (!verify_certificate(m, *doc.terms, spec)) return "terms do not recompose the matrix under the family constraints";
  if (doc.command == "rank" && doc.value && *doc.value != Rational(static_cast<unsigned long>(doc.terms->support_size()))) {
    return "rank value differs from the number of terms";
  }
  if (doc.command == "relaxed-rank" && doc.value && *doc.value != doc.terms->total()) {
    return "relaxed-rank value differs from the weight total";
  }
  return {};
}

}  // namespace corrpoly
