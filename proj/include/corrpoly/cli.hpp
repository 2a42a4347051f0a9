#pragma once

// Command implementations for the `corrpoly` tool. Everything runs in-process so
// tests can drive `run` with argument vectors and captured streams.
//
// Exit codes: 0 yes, 1 no, 2 input error, 3 promise violation (not a member).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrpoly/error.hpp"
#include "corrpoly/exactnum.hpp"
#include "corrpoly/formats.hpp"
#include "corrpoly/generators.hpp"
#include "corrpoly/hulls.hpp"
#include "corrpoly/ranks.hpp"
#include "corrpoly/reductions.hpp"
#include "corrpoly/structured.hpp"

namespace corrpoly::cli {

inline constexpr int kYes = 0;
inline constexpr int kNo = 1;
inline constexpr int kInputError = 2;
inline constexpr int kNotMember = 3;

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class Reader>
auto read_file(const std::string& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return reader(in, path);
}

inline MatrixFile load_matrix(const std::string& path) {
  return read_file(path, [](std::istream& in, const std::string& src) { return read_matrix(in, src); });
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::ParseError, "write to '" + path + "' failed");
}

inline void print_terms(std::ostream& out, const DecompositionCertificate& cert) {
  for (const auto& [k, w] : cert.weights) {
    out << "  k=" << k << " bits=" << bit_string(GeneratorId(cert.n, k)) << " weight=" << to_string(w) << '\n';
  }
}

inline void print_document(std::ostream& out, const CertificateDocument& doc) {
  out << answer_name(doc.answer) << '\n';
  out << "family: " << family_name(doc.family) << '\n';
  if (doc.rho) out << "rho: " << to_string(*doc.rho) << '\n';
  if (doc.threshold) out << "threshold: " << to_string(*doc.threshold) << '\n';
  if (doc.value) out << "value: " << to_string(*doc.value) << '\n';
  if (!doc.screen_failures.empty()) {
    out << "screen_failures:";
    for (const auto& s : doc.screen_failures) out << ' ' << s;
    out << '\n';
  }
  if (doc.terms) {
    out << "terms: " << doc.terms->support_size() << '\n';
    print_terms(out, *doc.terms);
  }
}

inline int exit_for(Answer a) {
  switch (a) {
    case Answer::Yes: return kYes;
    case Answer::No: return kNo;
    case Answer::NotMember: return kNotMember;
  }
  return kInputError;
}

inline std::size_t parse_count(const std::string& text, const char* what) {
  const Rational q = parse_rational(text);
  if (q < 0 || q.get_den() != 1) throw Error(ErrorCode::ParseError, std::string(what) + " must be a nonnegative integer");
  return q.get_num().get_ui();
}

struct MembershipArgs {
  std::string set;
  std::optional<std::string> rho;
  std::string matrix;
  std::optional<std::string> certificate;
  std::optional<std::string> batch;
};

// Returns the document, or throws for input errors. Asymmetric input is an
// input error; any other failed screen is a definite NO.
inline CertificateDocument membership_document(const RationalMatrix& m, const MembershipArgs& a,
                                               const SolveOptions& opts) {
  auto family = parse_family(a.set);
  if (!family) throw Error(ErrorCode::InvalidInstance, "unknown --set '" + a.set + "'");
  std::optional<Rational> rho;
  if (a.rho) rho = parse_rational(*a.rho);
  if (*family == HullFamily::ScaledCorrPolytope && !rho) {
    throw Error(ErrorCode::InvalidInstance, "--set rho-cor requires --rho");
  }
  if (*family != HullFamily::ScaledCorrPolytope && rho) {
    throw Error(ErrorCode::InvalidInstance, "--rho is only meaningful with --set rho-cor");
  }
  const HullSpec spec(*family, rho);
  if (!check_symmetric(m)) throw Error(ErrorCode::AsymmetricInput, "matrix is not symmetric");
  const auto res = decide_membership(m, spec, opts);
  CertificateDocument doc;
  doc.command = "membership";
  doc.family = *family;
  doc.n = m.dim();
  doc.rho = rho;
  doc.answer = res.member ? Answer::Yes : Answer::No;
  if (res.member) doc.terms = res.certificate;
  if (res.rejection) doc.screen_failures = res.rejection->screens;
  return doc;
}

inline int report_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
  return kInputError;
}

}  // namespace detail

inline int cmd_membership(const detail::MembershipArgs& a, const SolveOptions& opts, std::ostream& out,
                          std::ostream& err) {
  if (a.batch) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(*a.batch, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".mat") files.push_back(entry.path());
    }
    if (ec) {
      err << "error: cannot read directory '" << *a.batch << "'\n";
      return kInputError;
    }
    std::sort(files.begin(), files.end());
    struct Outcome {
      int code;
      std::string line;
    };
    std::vector<std::future<Outcome>> jobs;
    for (const auto& f : files) {
      jobs.push_back(std::async(std::launch::async, [f, a, opts]() -> Outcome {
        try {
          const auto m = detail::load_matrix(f.string()).matrix;
          const auto doc = detail::membership_document(m, a, opts);
          if (a.certificate) {
            detail::write_text((fs::path(*a.certificate) / f.stem()).string() + ".json", serialize(doc));
          }
          return {detail::exit_for(doc.answer), std::string(answer_name(doc.answer))};
        } catch (const std::exception& e) {
          return {kInputError, std::string("error: ") + e.what()};
        }
      }));
    }
    int worst = kYes;
    for (std::size_t i = 0; i < files.size(); ++i) {
      const auto o = jobs[i].get();
      out << files[i].filename().string() << ": " << o.line << '\n';
      if (o.code == kInputError) worst = kInputError;
    }
    return worst;
  }
  try {
    const auto m = detail::load_matrix(a.matrix).matrix;
    const auto doc = detail::membership_document(m, a, opts);
    detail::print_document(out, doc);
    if (a.certificate) detail::write_text(*a.certificate, serialize(doc));
    return detail::exit_for(doc.answer);
  } catch (const std::exception& e) {
    return detail::report_error(err, e);
  }
}

inline int cmd_rank(const std::string& set, const std::string& matrix, const std::optional<std::string>& threshold,
                    const std::optional<std::string>& certificate, const SolveOptions& opts, std::ostream& out,
                    std::ostream& err) {
  try {
    auto family = parse_family(set);
    if (!family || (*family != HullFamily::CorrCone && *family != HullFamily::CorrPolytope)) {
      throw Error(ErrorCode::InvalidInstance, "rank supports --set conx or cor");
    }
    const auto m = detail::load_matrix(matrix).matrix;
    if (!check_symmetric(m)) throw Error(ErrorCode::AsymmetricInput, "matrix is not symmetric");
    CertificateDocument doc;
    doc.command = "rank";
    doc.family = *family;
    doc.n = m.dim();
    RankResult r;
    if (threshold) {
      const std::size_t q = detail::parse_count(*threshold, "--threshold");
      doc.threshold = Rational(static_cast<unsigned long>(q));
      r = rank_decision(m, *family, q, opts);
    } else {
      r = rank_minimum(m, *family, opts);
    }
    if (r.status == RankStatus::NotMember) {
      doc.answer = Answer::NotMember;
      out << "not-member\n";
    } else {
      doc.answer = *r.threshold_met ? Answer::Yes : Answer::No;
      if (r.rank) doc.value = Rational(static_cast<unsigned long>(*r.rank));
      doc.terms = r.certificate;
      if (threshold) {
        out << answer_name(doc.answer) << '\n';
      } else {
        out << *r.rank << '\n';
      }
      if (doc.terms) detail::print_terms(out, *doc.terms);
    }
    if (certificate) detail::write_text(*certificate, serialize(doc));
    return detail::exit_for(doc.answer);
  } catch (const std::exception& e) {
    return detail::report_error(err, e);
  }
}

inline int cmd_relaxed_rank(const std::string& set, const std::string& matrix,
                            const std::optional<std::string>& threshold, const std::optional<std::string>& certificate,
                            const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (set != "conx") throw Error(ErrorCode::InvalidInstance, "relaxed-rank supports --set conx only");
    const auto m = detail::load_matrix(matrix).matrix;
    if (!check_symmetric(m)) throw Error(ErrorCode::AsymmetricInput, "matrix is not symmetric");
    CertificateDocument doc;
    doc.command = "relaxed-rank";
    doc.family = HullFamily::CorrCone;
    doc.n = m.dim();
    if (threshold) doc.threshold = parse_rational(*threshold);
    const auto r = relaxed_rank(m, opts);
    if (r.status == RankStatus::NotMember) {
      doc.answer = Answer::NotMember;
      out << "not-member\n";
    } else {
      doc.value = r.value;
      const bool holds = !doc.threshold || *r.value <= *doc.threshold;
      doc.answer = holds ? Answer::Yes : Answer::No;
      // A NO carries the optimum but no terms: terms alone cannot certify it.
      if (holds) doc.terms = r.certificate;
      if (threshold) out << answer_name(doc.answer) << '\n';
      out << to_string(*r.value) << '\n';
      if (doc.terms) detail::print_terms(out, *doc.terms);
    }
    if (certificate) detail::write_text(*certificate, serialize(doc));
    return detail::exit_for(doc.answer);
  } catch (const std::exception& e) {
    return detail::report_error(err, e);
  }
}

inline int cmd_reduce(const std::string& from, const std::string& in, const std::string& out_path, std::ostream& out,
                      std::ostream& err) {
  try {
    std::ostringstream text;
    if (from == "x3c") {
      const auto inst = detail::read_file(in, [](std::istream& s, const std::string& src) { return read_x3c(s, src); });
      const auto red = x3c_to_rank_instance(inst);
      write_matrix(text, red.matrix, red.threshold);
      out << red.provenance << '\n';
    } else if (from == "fcc") {
      const auto inst = detail::read_file(in, [](std::istream& s, const std::string& src) { return read_fcc(s, src); });
      const auto red = fcc_to_relaxed_rank_instance(inst);
      write_matrix(text, red.matrix, red.threshold);
      out << red.provenance << '\n';
    } else {
      const auto m = detail::load_matrix(in).matrix;
      RationalMatrix image;
      if (from == "cor-to-conx") {
        image = lift_cor_to_conx(m);
      } else if (from == "cor-to-ncor") {
        image = lift_to_normalized(m);
      } else if (from == "cor-to-cut") {
        image = cor_to_cut(m);
      } else if (from == "cut-to-cor") {
        image = cut_to_cor(m);
      } else {
        throw Error(ErrorCode::InvalidInstance, "unknown --from '" + from + "'");
      }
      write_matrix(text, image);
      out << from << ": " << m.dim() << "x" << m.dim() << " -> " << image.dim() << "x" << image.dim() << '\n';
    }
    detail::write_text(out_path, text.str());
    out << "wrote " << out_path << '\n';
    return kYes;
  } catch (const std::exception& e) {
    return detail::report_error(err, e);
  }
}

inline int cmd_check(const std::string& matrix, std::ostream& out, std::ostream& err) {
  try {
    const auto m = detail::load_matrix(matrix).matrix;
    const auto r = check_dnn(m);
    auto flag = [](bool b) { return b ? "true" : "false"; };
    out << "symmetric = " << flag(r.symmetric) << '\n';
    out << "nonnegative = " << flag(r.nonnegative) << '\n';
    out << "psd = " << flag(r.psd) << '\n';
    out << "dnn = " << flag(r.dnn) << '\n';
    if (r.first_violation) {
      const auto& v = *r.first_violation;
      out << "first_violation = " << v.condition << " at (" << v.i + 1 << "," << v.j + 1 << ")";
      if (v.schur_step) out << " schur_step " << *v.schur_step + 1;
      out << '\n';
    }
    return r.dnn ? kYes : kNo;
  } catch (const std::exception& e) {
    return detail::report_error(err, e);
  }
}

inline int cmd_generators(std::size_t n, const std::string& kind, const SolveOptions& opts, std::ostream& out,
                          std::ostream& err) {
  try {
    if (n == 0) throw Error(ErrorCode::OutOfRange, "--n must be positive");
    enforce_cap(n, opts);
    std::vector<std::uint64_t> ids;
    GeneratorKind gk;
    if (kind == "boolean") {
      gk = GeneratorKind::Boolean;
      for (std::uint64_t k = 0; k <= GeneratorId::max_id(n); ++k) ids.push_back(k);
    } else if (kind == "cut") {
      gk = GeneratorKind::Cut;
      ids = cut_representatives(n);
    } else {
      throw Error(ErrorCode::InvalidInstance, "unknown --kind '" + kind + "'");
    }
    for (auto k : ids) {
      const GeneratorId id(n, k);
      out << "k=" << k << " bits=" << bit_string(id) << '\n';
      const auto g = generator_of_kind(gk, id);
      for (std::size_t i = 0; i < n; ++i) {
        out << ' ';
        for (std::size_t j = 0; j < n; ++j) out << ' ' << to_string(g(i, j));
        out << '\n';
      }
    }
    return kYes;
  } catch (const std::exception& e) {
    return detail::report_error(err, e);
  }
}

inline int cmd_poly(const std::string& method, const std::string& matrix, const std::optional<std::string>& cliques,
                    const std::string& mode, const std::optional<std::string>& certificate, const SolveOptions& opts,
                    std::ostream& out, std::ostream& err) {
  try {
    const auto m = detail::load_matrix(matrix).matrix;
    enforce_cap(m.dim(), opts);
    if (!check_symmetric(m)) throw Error(ErrorCode::AsymmetricInput, "matrix is not symmetric");
    CertificateDocument doc;
    doc.command = mode == "relaxed-rank" ? "relaxed-rank" : "membership";
    doc.family = HullFamily::CorrCone;
    doc.n = m.dim();
    if (mode != "membership" && mode != "relaxed-rank") {
      throw Error(ErrorCode::InvalidInstance, "unknown --mode '" + mode + "'");
    }
    if (!check_nonnegative(m)) {
      doc.answer = mode == "membership" ? Answer::No : Answer::NotMember;
      doc.screen_failures = {"nonnegative"};
      detail::print_document(out, doc);
      if (certificate) detail::write_text(*certificate, serialize(doc));
      return detail::exit_for(doc.answer);
    }
    const SupportGraph g = support_graph(m);
    if (method == "forest") {
      if (mode != "membership") throw Error(ErrorCode::InvalidInstance, "the forest method decides membership only");
      const auto r = forest_decompose(m);
      if (!r.ok()) {
        doc.answer = Answer::No;
        detail::print_document(out, doc);
        out << "vertex " << r.failure->vertex + 1 << " slack " << to_string(r.failure->slack) << '\n';
      } else {
        const auto& d = *r.decomposition;
        doc.answer = Answer::Yes;
        doc.terms = d.certificate();
        out << "yes\n";
        for (const auto& [e, w] : d.edge_weights) {
          out << "edge " << e.first + 1 << " " << e.second + 1 << " weight " << to_string(w) << '\n';
        }
        for (const auto& [i, w] : d.loop_weights) out << "vertex " << i + 1 << " weight " << to_string(w) << '\n';
      }
    } else if (method == "clique") {
      CliqueFamily bags;
      if (cliques) {
        bags = detail::read_file(*cliques, [](std::istream& s, const std::string& src) { return read_cliques(s, src); });
        if (bags.n != m.dim()) throw Error(ErrorCode::DimensionMismatch, "clique file and matrix sizes differ");
      } else {
        bags = chordal_max_cliques(g);
      }
      const auto family = expand_subcliques(bags, g);
      if (mode == "membership") {
        const auto r = clique_lp_membership(m, family);
        doc.answer = r.member ? Answer::Yes : Answer::No;
        if (r.member) doc.terms = r.certificate;
      } else {
        const auto r = clique_lp_relaxed_rank(m, family);
        if (r.status == RankStatus::NotMember) {
          doc.answer = Answer::NotMember;
        } else {
          doc.answer = Answer::Yes;
          doc.value = r.value;
          doc.terms = r.certificate;
        }
      }
      detail::print_document(out, doc);
    } else {
      throw Error(ErrorCode::InvalidInstance, "unknown --method '" + method + "'");
    }
    if (certificate) detail::write_text(*certificate, serialize(doc));
    return detail::exit_for(doc.answer);
  } catch (const std::exception& e) {
    return detail::report_error(err, e);
  }
}

inline int cmd_verify(const std::string& matrix, const std::string& certificate, std::ostream& out,
                      std::ostream& err) {
  try {
    const auto m = detail::load_matrix(matrix).matrix;
    const auto doc = parse_document(detail::slurp(certificate));
    const auto reason = verify_document(doc, m);
    if (reason.empty()) {
      out << "valid\n";
      return kYes;
    }
    out << "invalid: " << reason << '\n';
    return kNo;
  } catch (const std::exception& e) {
    return detail::report_error(err, e);
  }
}

/// Parses `args` (without the program name) and runs one command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact membership, rank and reduction tools for correlation and cut polyhedra", "corrpoly"};
  app.require_subcommand(1);
  SolveOptions opts;
  app.add_option("--max-n", opts.max_n, "largest dimension for which generators are materialized")
      ->capture_default_str();

  detail::MembershipArgs mem;
  auto* membership = app.add_subcommand("membership", "decide membership in a cone or polytope");
  membership->add_option("--set", mem.set, "conx, cor, rho-cor, ncor, cut, ncut or cutcone")->required();
  membership->add_option("--rho", mem.rho, "scale for rho-cor");
  auto* mem_matrix = membership->add_option("--matrix", mem.matrix, "matrix file");
  membership->add_option("--certificate", mem.certificate, "certificate output (a directory with --batch)");
  auto* mem_batch = membership->add_option("--batch", mem.batch, "decide every *.mat file in a directory");
  mem_matrix->excludes(mem_batch);

  std::string set = "conx", matrix, kind = "boolean", method, mode = "membership", from, in, out_path;
  std::optional<std::string> threshold, certificate, cliques;
  std::size_t gen_n = 0;

  auto* rank = app.add_subcommand("rank", "minimum number of generators, or a threshold decision");
  rank->add_option("--set", set, "conx or cor")->capture_default_str();
  rank->add_option("--matrix", matrix, "matrix file")->required();
  rank->add_option("--threshold", threshold, "decide rank <= threshold");
  rank->add_option("--certificate", certificate, "certificate output");

  auto* relaxed = app.add_subcommand("relaxed-rank", "minimum total weight over conic decompositions");
  relaxed->add_option("--set", set, "conx")->capture_default_str();
  relaxed->add_option("--matrix", matrix, "matrix file")->required();
  relaxed->add_option("--threshold", threshold, "decide relaxed rank <= threshold");
  relaxed->add_option("--certificate", certificate, "certificate output");

  auto* reduce = app.add_subcommand("reduce", "build a reduced instance");
  reduce->add_option("--from", from, "x3c, fcc, cor-to-conx, cor-to-ncor, cor-to-cut or cut-to-cor")->required();
  reduce->add_option("--in", in, "input file")->required();
  reduce->add_option("--out", out_path, "output matrix file")->required();

  auto* check = app.add_subcommand("check", "report symmetry, nonnegativity and PSD");
  check->add_option("--matrix", matrix, "matrix file")->required();

  auto* generators = app.add_subcommand("generators", "list the generators of dimension n");
  generators->add_option("--n", gen_n, "dimension")->required();
  generators->add_option("--kind", kind, "boolean or cut")->capture_default_str();

  auto* poly = app.add_subcommand("poly", "structured solvers for forest or clique-covered supports");
  poly->add_option("--method", method, "forest or clique")->required();
  poly->add_option("--matrix", matrix, "matrix file")->required();
  poly->add_option("--cliques", cliques, "clique family file (default: cliques of a chordal support)");
  poly->add_option("--mode", mode, "membership or relaxed-rank")->capture_default_str();
  poly->add_option("--certificate", certificate, "certificate output");

  auto* verify = app.add_subcommand("verify", "re-check a certificate document against a matrix");
  verify->add_option("--matrix", matrix, "matrix file")->required();
  verify->add_option("--certificate", certificate, "certificate document")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kYes;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kYes;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (membership->parsed()) {
    if (!mem.batch && mem.matrix.empty()) {
      err << "error: membership needs --matrix or --batch\n";
      return kInputError;
    }
    return cmd_membership(mem, opts, out, err);
  }
  if (rank->parsed()) return cmd_rank(set, matrix, threshold, certificate, opts, out, err);
  if (relaxed->parsed()) return cmd_relaxed_rank(set, matrix, threshold, certificate, opts, out, err);
  if (reduce->parsed()) return cmd_reduce(from, in, out_path, out, err);
  if (check->parsed()) return cmd_check(matrix, out, err);
  if (generators->parsed()) return cmd_generators(gen_n, kind, opts, out, err);
  if (poly->parsed()) return cmd_poly(method, matrix, cliques, mode, certificate, opts, out, err);
  if (verify->parsed()) return cmd_verify(matrix, *certificate, out, err);
  return kInputError;
}

}  // namespace corrpoly::cli
