#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "corrpoly/cli.hpp"

using namespace corrpoly;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return (fs::path(CORRPOLY_FIXTURES) / name).string(); }

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("corrpoly-cli-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, MembershipExamples) {
  const auto ones = run({"membership", "--set", "conx", "--matrix", fixture("ones2.mat"), "--certificate", tmp("c.json")});
  EXPECT_EQ(ones.code, cli::kYes) << ones.err;
  const auto doc = parse_document(read(tmp("c.json")));
  ASSERT_TRUE(doc.terms);
  EXPECT_EQ(doc.terms->weights, (std::map<std::uint64_t, Rational>{{3, 1}}));

  EXPECT_EQ(run({"membership", "--set", "cor", "--matrix", fixture("id2.mat")}).code, cli::kNo);
  const auto norho = run({"membership", "--set", "rho-cor", "--matrix", fixture("ones2.mat")});
  EXPECT_EQ(norho.code, cli::kInputError);
  EXPECT_NE(norho.err.find("--rho"), std::string::npos);
  EXPECT_EQ(run({"membership", "--set", "rho-cor", "--rho", "2", "--matrix", fixture("ones2.mat")}).code, cli::kYes);
}

TEST_F(Cli, MembershipInputErrors) {
  EXPECT_EQ(run({"membership", "--set", "conx", "--matrix", fixture("asym.mat")}).code, cli::kInputError);
  EXPECT_EQ(run({"membership", "--set", "bogus", "--matrix", fixture("ones2.mat")}).code, cli::kInputError);
  EXPECT_EQ(run({"membership", "--set", "conx", "--matrix", tmp("missing.mat")}).code, cli::kInputError);
  EXPECT_EQ(run({"membership", "--set", "conx"}).code, cli::kInputError);
  EXPECT_EQ(run({"membership", "--matrix", fixture("ones2.mat")}).code, cli::kInputError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kInputError);
  EXPECT_EQ(run({}).code, cli::kInputError);

  write("bad.mat", "2\n1 1\n1 1/0\n");
  const auto bad = run({"membership", "--set", "conx", "--matrix", tmp("bad.mat")});
  EXPECT_EQ(bad.code, cli::kInputError);
  EXPECT_NE(bad.err.find("bad.mat:3:3:"), std::string::npos) << bad.err;
}

TEST_F(Cli, ScreenFailureIsNo) {
  const auto r = run({"membership", "--set", "conx", "--matrix", fixture("notdnn.mat"), "--certificate", tmp("n.json")});
  EXPECT_EQ(r.code, cli::kNo);
  const auto doc = parse_document(read(tmp("n.json")));
  EXPECT_EQ(doc.answer, Answer::No);
  EXPECT_FALSE(doc.screen_failures.empty());
  EXPECT_FALSE(doc.terms);
}

TEST_F(Cli, CapReportsTheLimit) {
  const auto r = run({"--max-n", "3", "membership", "--set", "conx", "--matrix", fixture("ones4.mat")});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_NE(r.err.find("dimension 4 exceeds the configured limit 3"), std::string::npos) << r.err;
  EXPECT_EQ(run({"--max-n", "2", "generators", "--n", "3"}).code, cli::kInputError);
}

TEST_F(Cli, RankExamples) {
  const auto ones = run({"rank", "--set", "conx", "--matrix", fixture("ones4.mat")});
  EXPECT_EQ(ones.code, cli::kYes);
  EXPECT_EQ(ones.out.substr(0, 2), "1\n");
  EXPECT_EQ(run({"relaxed-rank", "--matrix", fixture("ones2.mat"), "--threshold", "1"}).code, cli::kYes);
  EXPECT_EQ(run({"rank", "--set", "conx", "--matrix", fixture("notdnn.mat")}).code, cli::kNotMember);
}

TEST_F(Cli, RankThresholdsAndDocuments) {
  const auto no = run({"rank", "--set", "conx", "--matrix", fixture("id2.mat"), "--threshold", "1", "--certificate",
                       tmp("no.json")});
  EXPECT_EQ(no.code, cli::kNo);
  EXPECT_EQ(no.out, "no\n");
  EXPECT_FALSE(parse_document(read(tmp("no.json"))).terms);

  const auto yes = run({"rank", "--set", "conx", "--matrix", fixture("id2.mat"), "--threshold", "2", "--certificate",
                        tmp("yes.json")});
  EXPECT_EQ(yes.code, cli::kYes);
  EXPECT_EQ(run({"verify", "--matrix", fixture("id2.mat"), "--certificate", tmp("yes.json")}).code, cli::kYes);

  EXPECT_EQ(run({"rank", "--set", "cut", "--matrix", fixture("id2.mat")}).code, cli::kInputError);
  EXPECT_EQ(run({"rank", "--matrix", fixture("id2.mat"), "--threshold", "1/2"}).code, cli::kInputError);

  const auto rr = run({"relaxed-rank", "--matrix", fixture("id2.mat"), "--threshold", "3/2", "--certificate",
                       tmp("rr.json")});
  EXPECT_EQ(rr.code, cli::kNo);
  EXPECT_EQ(rr.out, "no\n2\n");
  const auto rrdoc = parse_document(read(tmp("rr.json")));
  EXPECT_EQ(*rrdoc.value, 2);
  EXPECT_FALSE(rrdoc.terms);

  const auto value = run({"relaxed-rank", "--matrix", fixture("path3.mat")});
  EXPECT_EQ(value.code, cli::kYes);
  EXPECT_EQ(value.out.substr(0, 2), "4\n");
  EXPECT_EQ(run({"relaxed-rank", "--matrix", fixture("notdnn.mat")}).code, cli::kNotMember);
  EXPECT_EQ(run({"relaxed-rank", "--set", "cor", "--matrix", fixture("id2.mat")}).code, cli::kInputError);
}

TEST_F(Cli, ReduceExamples) {
  const auto x = run({"reduce", "--from", "x3c", "--in", fixture("tiny.x3c"), "--out", tmp("tiny.mat")});
  EXPECT_EQ(x.code, cli::kYes) << x.err;
  EXPECT_EQ(read(tmp("tiny.mat")), "4\n1 1 1 1\n1 1 1 1\n1 1 1 1\n1 1 1 1\nthreshold = 1\n");

  const auto f = run({"reduce", "--from", "fcc", "--in", fixture("k1.fcc"), "--out", tmp("k1.mat")});
  EXPECT_EQ(f.code, cli::kYes) << f.err;
  EXPECT_EQ(read(tmp("k1.mat")), "2\n1/2 1/4\n1/4 1/4\nthreshold = 7/4\n");

  ASSERT_EQ(run({"reduce", "--from", "cor-to-cut", "--in", fixture("z.mat"), "--out", tmp("y.mat")}).code, cli::kYes);
  ASSERT_EQ(run({"reduce", "--from", "cut-to-cor", "--in", tmp("y.mat"), "--out", tmp("z2.mat")}).code, cli::kYes);
  EXPECT_EQ(read(tmp("z2.mat")), read(fixture("z.mat")));

  EXPECT_EQ(run({"reduce", "--from", "cor-to-conx", "--in", fixture("z.mat"), "--out", tmp("l.mat")}).code, cli::kYes);
  EXPECT_EQ(run({"membership", "--set", "conx", "--matrix", tmp("l.mat")}).code, cli::kYes);
  EXPECT_EQ(run({"reduce", "--from", "cor-to-ncor", "--in", fixture("z.mat"), "--out", tmp("b.mat")}).code, cli::kYes);
  EXPECT_EQ(run({"membership", "--set", "ncor", "--matrix", tmp("b.mat")}).code, cli::kYes);
}

TEST_F(Cli, ReduceErrors) {
  write("nonlinear.x3c", "6 2\n1 2 3\n3 4 5\n");
  EXPECT_EQ(run({"reduce", "--from", "x3c", "--in", tmp("nonlinear.x3c"), "--out", tmp("o.mat")}).code, cli::kYes);
  write("overlap.x3c", "6 2\n1 2 3\n1 2 4\n");
  const auto nl = run({"reduce", "--from", "x3c", "--in", tmp("overlap.x3c"), "--out", tmp("o.mat")});
  EXPECT_EQ(nl.code, cli::kInputError);
  EXPECT_NE(nl.err.find("NotLinear"), std::string::npos) << nl.err;
  EXPECT_EQ(run({"reduce", "--from", "sat", "--in", fixture("z.mat"), "--out", tmp("o.mat")}).code, cli::kInputError);
  EXPECT_EQ(run({"reduce", "--from", "x3c", "--in", fixture("z.mat"), "--out", tmp("o.mat")}).code, cli::kInputError);
}

TEST_F(Cli, ReducedInstancesSolve) {
  ASSERT_EQ(run({"reduce", "--from", "x3c", "--in", fixture("pair.x3c"), "--out", tmp("p.mat")}).code, cli::kYes);
  EXPECT_EQ(run({"rank", "--matrix", tmp("p.mat"), "--threshold", "2"}).code, cli::kYes);
  EXPECT_EQ(run({"rank", "--matrix", tmp("p.mat"), "--threshold", "1"}).code, cli::kNo);

  ASSERT_EQ(run({"reduce", "--from", "fcc", "--in", fixture("path.fcc"), "--out", tmp("f.mat")}).code, cli::kYes);
  const auto threshold = read_matrix(*std::make_unique<std::ifstream>(tmp("f.mat"))).threshold;
  ASSERT_TRUE(threshold);
  EXPECT_EQ(run({"relaxed-rank", "--matrix", tmp("f.mat"), "--threshold", to_string(*threshold)}).code, cli::kYes);
}

TEST_F(Cli, CheckExamples) {
  const auto off = run({"check", "--matrix", fixture("offdiag.mat")});
  EXPECT_EQ(off.code, cli::kNo);
  EXPECT_NE(off.out.find("psd = false"), std::string::npos);
  EXPECT_NE(off.out.find("first_violation = psd"), std::string::npos);
  const auto ones = run({"check", "--matrix", fixture("ones2.mat")});
  EXPECT_EQ(ones.code, cli::kYes);
  EXPECT_EQ(ones.out, "symmetric = true\nnonnegative = true\npsd = true\ndnn = true\n");
  const auto asym = run({"check", "--matrix", fixture("asym.mat")});
  EXPECT_EQ(asym.code, cli::kNo);
  EXPECT_NE(asym.out.find("symmetric = false"), std::string::npos);
}

TEST_F(Cli, GeneratorsListing) {
  const auto g = run({"generators", "--n", "2"});
  EXPECT_EQ(g.code, cli::kYes);
  EXPECT_EQ(g.out,
            "k=0 bits=00\n  0 0\n  0 0\n"
            "k=1 bits=10\n  1 0\n  0 0\n"
            "k=2 bits=01\n  0 0\n  0 1\n"
            "k=3 bits=11\n  1 1\n  1 1\n");
  const auto c = run({"generators", "--n", "2", "--kind", "cut"});
  EXPECT_EQ(c.code, cli::kYes);
  EXPECT_EQ(c.out, "k=0 bits=00\n  1 1\n  1 1\nk=1 bits=10\n  1 -1\n  -1 1\n");
  EXPECT_EQ(run({"generators", "--n", "0"}).code, cli::kInputError);
  EXPECT_EQ(run({"generators", "--n", "2", "--kind", "odd"}).code, cli::kInputError);
}

TEST_F(Cli, PolyForest) {
  const auto tree = run({"poly", "--method", "forest", "--matrix", fixture("tree.mat"), "--certificate", tmp("t.json")});
  EXPECT_EQ(tree.code, cli::kYes);
  EXPECT_EQ(tree.out, "yes\nedge 1 2 weight 1\nvertex 1 weight 1\nvertex 2 weight 0\n");
  EXPECT_EQ(run({"verify", "--matrix", fixture("tree.mat"), "--certificate", tmp("t.json")}).code, cli::kYes);

  const auto bad = run({"poly", "--method", "forest", "--matrix", fixture("notdnn.mat")});
  EXPECT_EQ(bad.code, cli::kNo);
  EXPECT_NE(bad.out.find("vertex 1 slack -1"), std::string::npos);

  EXPECT_EQ(run({"poly", "--method", "forest", "--matrix", fixture("ones4.mat")}).code, cli::kInputError);
  write("neg.mat", "2\n1 -1\n-1 1\n");
  EXPECT_EQ(run({"poly", "--method", "forest", "--matrix", tmp("neg.mat")}).code, cli::kNo);
}

TEST_F(Cli, PolyClique) {
  const auto mem = run({"poly", "--method", "clique", "--matrix", fixture("path3.mat"), "--certificate", tmp("m.json")});
  EXPECT_EQ(mem.code, cli::kYes);
  EXPECT_EQ(run({"verify", "--matrix", fixture("path3.mat"), "--certificate", tmp("m.json")}).code, cli::kYes);

  const auto rr = run({"poly", "--method", "clique", "--matrix", fixture("path3.mat"), "--cliques",
                       fixture("path.cliques"), "--mode", "relaxed-rank", "--certificate", tmp("r.json")});
  EXPECT_EQ(rr.code, cli::kYes);
  EXPECT_NE(rr.out.find("value: 4"), std::string::npos) << rr.out;
  EXPECT_EQ(run({"verify", "--matrix", fixture("path3.mat"), "--certificate", tmp("r.json")}).code, cli::kYes);

  write("c4.mat", "4\n2 1 0 1\n1 2 1 0\n0 1 2 1\n1 0 1 2\n");
  const auto c4 = run({"poly", "--method", "clique", "--matrix", tmp("c4.mat")});
  EXPECT_EQ(c4.code, cli::kInputError);
  EXPECT_NE(c4.err.find("NotChordal"), std::string::npos);

  write("uncovered.cliques", "3 3\n1\n2\n3\n");
  EXPECT_EQ(run({"poly", "--method", "clique", "--matrix", fixture("path3.mat"), "--cliques", tmp("uncovered.cliques")})
                .code,
            cli::kInputError);
  EXPECT_EQ(run({"poly", "--method", "tree", "--matrix", fixture("path3.mat")}).code, cli::kInputError);
}

TEST_F(Cli, VerifyOutcomes) {
  ASSERT_EQ(run({"membership", "--set", "cor", "--matrix", fixture("z.mat"), "--certificate", tmp("z.json")}).code,
            cli::kYes);
  const auto ok = run({"verify", "--matrix", fixture("z.mat"), "--certificate", tmp("z.json")});
  EXPECT_EQ(ok.code, cli::kYes);
  EXPECT_EQ(ok.out, "valid\n");

  const auto wrong = run({"verify", "--matrix", fixture("ones2.mat"), "--certificate", tmp("z.json")});
  EXPECT_EQ(wrong.code, cli::kNo);
  EXPECT_EQ(wrong.out.rfind("invalid: ", 0), 0u);

  write("garbage.json", "{\"problem\":");
  EXPECT_EQ(run({"verify", "--matrix", fixture("z.mat"), "--certificate", tmp("garbage.json")}).code,
            cli::kInputError);
  EXPECT_EQ(run({"verify", "--matrix", fixture("z.mat")}).code, cli::kInputError);
}

TEST_F(Cli, OutputIsDeterministic) {
  for (int pass = 0; pass < 2; ++pass) {
    const auto name = tmp("d" + std::to_string(pass) + ".json");
    ASSERT_EQ(run({"membership", "--set", "cor", "--matrix", fixture("z.mat"), "--certificate", name}).code, cli::kYes);
  }
  EXPECT_EQ(read(tmp("d0.json")), read(tmp("d1.json")));
}

TEST_F(Cli, BatchMode) {
  fs::create_directories(dir_ / "in");
  fs::create_directories(dir_ / "certs");
  fs::copy_file(fixture("ones2.mat"), dir_ / "in" / "a.mat");
  fs::copy_file(fixture("notdnn.mat"), dir_ / "in" / "b.mat");
  fs::copy_file(fixture("id2.mat"), dir_ / "in" / "c.mat");
  write("in/notes.txt", "ignored");
  const auto ok = run({"membership", "--set", "conx", "--batch", tmp("in"), "--certificate", tmp("certs")});
  EXPECT_EQ(ok.code, cli::kYes) << ok.err;
  EXPECT_EQ(ok.out, "a.mat: yes\nb.mat: no\nc.mat: yes\n");
  for (const char* stem : {"a", "c"}) {
    const auto path = dir_ / "certs" / (std::string(stem) + ".json");
    ASSERT_TRUE(fs::exists(path));
    EXPECT_EQ(run({"verify", "--matrix", tmp(std::string("in/") + stem + ".mat"), "--certificate", path.string()}).code,
              cli::kYes);
  }
  EXPECT_TRUE(fs::exists(dir_ / "certs" / "b.json"));

  write("in/d.mat", "2\n1 2\n");
  const auto bad = run({"membership", "--set", "conx", "--batch", tmp("in")});
  EXPECT_EQ(bad.code, cli::kInputError);
  EXPECT_NE(bad.out.find("d.mat: error:"), std::string::npos) << bad.out;
  EXPECT_NE(bad.out.find("a.mat: yes"), std::string::npos);

  EXPECT_EQ(run({"membership", "--set", "conx", "--batch", tmp("nope")}).code, cli::kInputError);
  EXPECT_EQ(run({"membership", "--set", "conx", "--batch", tmp("in"), "--matrix", fixture("id2.mat")}).code,
            cli::kInputError);
}

TEST_F(Cli, HelpExitsZero) {
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, cli::kYes);
  EXPECT_NE(h.out.find("membership"), std::string::npos);
}
