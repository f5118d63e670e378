#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "support/networks.hpp"

using namespace bn::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = bn::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = std::string(BN_TEST_TMP_DIR) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("query prints the posterior, class and method") {
  const auto r = run({"query", fixture_path("serial.bn"), "--target", "Z", "--evidence", "X=true"});
  CHECK(r.code == bn::cli::kOk);
  CHECK(r.out ==
        "P(Z=true) = 0.809000\n"
        "P(Z=false) = 0.191000\n"
        "class: Forward\n"
        "method: bp\n");
  CHECK(r.err.empty());
}

TEST_CASE("dsep with an instantiated middle node") {
  const auto r = run({"dsep", fixture_path("serial.bn"), "X", "Z", "--given", "Y"});
  CHECK(r.code == bn::cli::kOk);
  CHECK(r.out == "d-separated\n");

  const auto open = run({"dsep", fixture_path("serial.bn"), "X", "Z"});
  CHECK(open.out == "d-connected: X -> Y -> Z\n");
  const auto collider = run({"dsep", fixture_path("converging.bn"), "X", "Z", "--given", "Y"});
  CHECK(collider.out == "d-connected: X -> Y <- Z\n");
}

TEST_CASE("cutset of the sprinkler network") {
  const auto r = run({"cutset", fixture_path("sprinkler.bn")});
  CHECK(r.code == bn::cli::kOk);
  CHECK(r.out == "cutset: X1\n");
  CHECK(run({"cutset", fixture_path("serial.bn")}).out == "polytree\n");
}

TEST_CASE("query methods and soft evidence") {
  const auto path = fixture_path("sprinkler.bn");
  const auto cut = run({"query", path, "--target", "X3", "--evidence", "X5=slippery"});
  CHECK(cut.code == 0);
  CHECK(cut.out.find("method: cutset\n") != std::string::npos);
  CHECK(cut.out.find("class: Backward\n") != std::string::npos);
  const auto en = run({"query", path, "--target", "X3", "--evidence", "X5=slippery", "--method", "enum"});
  CHECK(en.out.substr(0, en.out.find("class:")) == cut.out.substr(0, cut.out.find("class:")));
  CHECK(en.out.find("method: enum\n") != std::string::npos);

  const auto soft = run({"query", fixture_path("serial.bn"), "--target", "X", "--soft", "Z=0.7:0.2"});
  CHECK(soft.code == 0);
  CHECK(soft.out.find("class: Backward\n") != std::string::npos);

  const auto prior = run({"query", fixture_path("serial.bn"), "--target", "X"});
  CHECK(prior.out == "P(X=true) = 0.900000\nP(X=false) = 0.100000\nclass: none\nmethod: bp\n");
}

TEST_CASE("trace lines precede the result") {
  const auto r = run({"query", fixture_path("serial.bn"), "--target", "Z", "--evidence", "X=true", "--trace"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "MSG Z Y lambda 1,1\n"
        "MSG Y X lambda 1,1\n"
        "MSG X Y pi 1,0\n"
        "MSG Y Z pi 0.85,0.15\n"
        "P(Z=true) = 0.809000\n"
        "P(Z=false) = 0.191000\n"
        "class: Forward\n"
        "method: bp\n");
  const auto loopy = run({"query", fixture_path("sprinkler.bn"), "--target", "X3", "--trace"});
  CHECK(loopy.code == bn::cli::kUsageError);
}

TEST_CASE("classify prints sub-verdicts") {
  const auto r = run({"classify", fixture_path("sprinkler.bn"), "--target", "X3", "--evidence",
                      "X2=rain,X5=slippery"});
  CHECK(r.code == 0);
  CHECK(r.out == "class: Mixed\nX2: Intercausal\nX5: Backward\n");
}

TEST_CASE("joint probability") {
  const auto r = run({"joint", fixture_path("serial.bn"), "--assign", "X=true,Y=true,Z=true"});
  CHECK(r.code == 0);
  CHECK(r.out == "P(X=true, Y=true, Z=true) = 0.726750\n");
  CHECK(run({"joint", fixture_path("serial.bn"), "--assign", "X=true,Y=true"}).code == bn::cli::kUsageError);
}

TEST_CASE("validate") {
  CHECK(run({"validate", fixture_path("loopy8.bn")}).out == "valid\n");

  std::string text = fixture_text("serial.bn");
  text.replace(text.find("0.03, 0.97"), 10, "0.53, 0.97");
  const auto bad = run({"validate", temp_file("bad_row.bn", text)});
  CHECK(bad.code == bn::cli::kDomainError);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("line ") != std::string::npos);

  const auto empty = run({"validate", temp_file("empty.bn", "")});
  CHECK(empty.code == bn::cli::kUsageError);
  CHECK(empty.err.find("missing network header") != std::string::npos);

  std::string loose = fixture_text("serial.bn");
  loose.replace(loose.find("0.9, 0.1"), 8, "0.9, 0.1000004");
  const auto path = temp_file("loose.bn", loose);
  CHECK(run({"validate", path}).code == bn::cli::kDomainError);
  CHECK(run({"--normalize", "validate", path}).code == bn::cli::kOk);
}

TEST_CASE("domain errors exit with 1") {
  std::string text = fixture_text("serial.bn");
  text.replace(text.find("true : 0.85, 0.15"), 17, "true : 1, 0");
  const auto path = temp_file("deterministic.bn", text);
  const auto r = run({"query", path, "--target", "Z", "--evidence", "X=true,Y=false"});
  CHECK(r.code == bn::cli::kDomainError);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());

  const auto bp = run({"query", fixture_path("sprinkler.bn"), "--target", "X3", "--method", "bp"});
  CHECK(bp.code == bn::cli::kDomainError);
}

TEST_CASE("usage errors exit with 2") {
  const auto serial = fixture_path("serial.bn");
  CHECK(run({}).code == bn::cli::kUsageError);
  CHECK(run({"frobnicate"}).code == bn::cli::kUsageError);
  CHECK(run({"query", serial}).code == bn::cli::kUsageError);
  CHECK(run({"query", serial, "--target", "W"}).code == bn::cli::kUsageError);
  CHECK(run({"query", serial, "--target", "Z", "--evidence", "X=maybe"}).code == bn::cli::kUsageError);
  CHECK(run({"query", serial, "--target", "Z", "--evidence", "Z=true"}).code == bn::cli::kUsageError);
  CHECK(run({"query", serial, "--target", "Z", "--soft", "X=0.5"}).code == bn::cli::kUsageError);
  CHECK(run({"query", serial, "--target", "Z", "--method", "magic"}).code == bn::cli::kUsageError);
  CHECK(run({"dsep", serial, "X", "X"}).code == bn::cli::kUsageError);
  CHECK(run({"classify", serial, "--target", "Z"}).code == bn::cli::kUsageError);
  CHECK(run({"query", "/nonexistent.bn", "--target", "Z"}).code == bn::cli::kUsageError);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"query", fixture_path("loopy8.bn"), "--target", "N0", "--evidence", "N7=s1"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}
