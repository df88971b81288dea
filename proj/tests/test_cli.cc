#include "deon/cli.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

using deon::run;
using json = nlohmann::json;

namespace {

const std::string kDir = DEON_FIXTURES;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json call_json(std::vector<std::string> args, int expected) {
  args.push_back("--format");
  args.push_back("json");
  const Result r = call(args);
  INFO(r.out << r.err);
  CHECK(r.code == expected);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["exit"] == expected);
  CHECK(j.contains("time_ms"));
  return j;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse") {
  const Result r = call({"parse", "O{p|q}->box p"});
  CHECK(r.code == 0);
  CHECK(r.out == "O{p | q} -> box p\n");
  const json j = call_json({"parse", "forall x. P(x) & c"}, 0);
  CHECK(j["command"] == "parse");
  CHECK(j["closed"] == true);
  CHECK(call({"parse", "O{p"}).code == 3);
  CHECK(call({"parse", "--logic", "sdl", "O{p | q}"}).code == 3);
}

TEST_CASE("check") {
  json j = call_json({"check", "--logic", "e", "--complete", "O{p | p}"}, 0);
  CHECK(j["verdict"] == "valid");
  CHECK(j["complete"] == true);
  CHECK(j["subformulas"].get<int>() > 0);
  j = call_json({"check", "--logic", "e", "O{p | q}"}, 1);
  CHECK(j["verdict"] == "countermodel_found");
  CHECK(j["model"]["worlds"] == 1);
  CHECK(j["world"] == 0);
  j = call_json({"check", "--logic", "sdl", "--bound", "2", "O p -> P p"}, 2);
  CHECK(j["verdict"] == "no_model_up_to");
  CHECK(j["searched_up_to"] == 2);
  CHECK(j["bound"] == 2);
  CHECK(call({"check", "--logic", "sdl", "O p -> P p", "--complete"}).out.find("verdict: valid") == 0);
  CHECK(call({"check", "--logic", "sdl", "p", "q"}).code == 3);
}

TEST_CASE("model") {
  json j = call_json({"model", "--logic", "sdl", "O p", "~q"}, 0);
  CHECK(j["verdict"] == "model_found");
  CHECK(j["formulas"].size() == 2);
  j = call_json({"model", "--logic", "sdl", "--complete", "O p", "O ~p"}, 1);
  CHECK(j["verdict"] == "decided_unsatisfiable");
  CHECK(j["method"] == "type-elimination");
  j = call_json({"model", "--logic", "e", "--frame", "total,transitive", "O{p | true}", "~p"}, 2);
  CHECK(j["verdict"] == "no_model_up_to");
  CHECK(call({"model", "--frame", "euclidean", "p"}).code == 3);
  CHECK(call({"model", "--logic", "modal", "p"}).code == 3);
}

TEST_CASE("exhausting the bound is undetermined") {
  const Result r = call({"model", "--logic", "e", "--bound", "4", "p", "~p", "--workers", "2"});
  CHECK(r.code == 2);
}

TEST_CASE("eval") {
  const std::string model = temp_file("deon_cli_model.json",
                                      R"({"worlds":2,"relation":[[0,0],[0,1],[1,1]],"valuation":{"p":[0],"q":[0,1]}})");
  json j = call_json({"eval", "--model", model, "O{p | q}"}, 0);
  CHECK(j["valid"] == true);
  CHECK(j["truth_set"] == json::array({0, 1}));
  j = call_json({"eval", "--model", model, "--world", "1", "p"}, 1);
  CHECK(j["holds_at_world"] == false);
  CHECK(call({"eval", "--model", model, "--world", "5", "p"}).code == 3);
  CHECK(call({"eval", "--model", model + ".missing", "p"}).code == 3);
  CHECK(call({"eval", "--model", model, "zz(q)"}).code == 3);
}

TEST_CASE("translate") {
  const Result steps = call({"translate", "--logic", "sdl", "--show-steps", "dia forall x. P(x)"});
  CHECK(steps.code == 0);
  CHECK(steps.out.find("  ◇ (Π' (λx. λw. P x w))\n") != std::string::npos);
  CHECK(steps.out.find("  λw. ¬Π(λv. ¬(R w v ∧ Π(λx. P x v)))\n") != std::string::npos);
  const json j = call_json({"translate", "--logic", "sdl", "--show-steps", "dia forall x. P(x)"}, 0);
  CHECK(j["steps"].size() == 11);
  CHECK(j["first_order"] == "∀W0. ∃W1. R(W0,W1) ∧ ∀X0. P(X0,W1)");
  CHECK(j["guarded"] == false);
  CHECK(call_json({"translate", "--logic", "sdl", "box (p -> dia q)"}, 0)["guarded"] == true);
  const Result tptp = call({"translate", "--logic", "sdl", "--tptp", "--name", "box_and", "box (p & q)"});
  CHECK(tptp.code == 0);
  CHECK(tptp.out == slurp(kDir + "/box_and.p"));
  const json local = call_json({"translate", "--logic", "sdl", "--local", "dia forall x. P(x)"}, 0);
  CHECK(local["first_order"] == "∃W0. R(aw,W0) ∧ ∀X0. P(X0,W0)");
  CHECK(call({"translate", "--logic", "sdl", "R"}).code == 3);
}

TEST_CASE("correspondence") {
  const json j = call_json(
      {"correspondence", "--logic", "e", "--frame", "transitive", "O{r | p} & ~O{~q | p} -> O{r | p & q}"}, 0);
  CHECK(j["formula"] == "O{r | p} & ~O{~q | p} -> O{r | p & q}");
  CHECK(j["frame_implies_schema"] == true);
  CHECK(j["converse_fails"] == true);
  CHECK(j["witness"]["worlds"] == 2);
  const json none = call_json({"correspondence", "--logic", "sdl", "--frame", "serial", "--bound", "2", "O p -> p"}, 1);
  CHECK(none["frame_implies_schema"] == false);
  CHECK(none.contains("counterexample"));
  CHECK(call({"correspondence", "--logic", "sdl", "O p -> p"}).code == 3);
}

TEST_CASE("kb consistency") {
  json j = call_json({"kb", "consistency", "--logic", "sdl", "--complete", kDir + "/gdpr_sdl.kb"}, 1);
  CHECK(j["command"] == "kb consistency");
  CHECK(j["consistent"] == false);
  CHECK(j["mus"].size() == 3);
  j = call_json({"kb", "consistency", "--logic", "e", "--kb", kDir + "/gdpr_e.kb"}, 0);
  CHECK(j["consistent"] == true);
  CHECK(j["model"]["domain"] == json::array({"d1", "mary"}));
  CHECK(call({"kb", "consistency", kDir + "/nope.kb"}).code == 3);
  CHECK(call({"kb", "consistency"}).code == 3);
}

TEST_CASE("kb entail") {
  json j = call_json({"kb", "entail", "--logic", "sdl", "--complete", kDir + "/gdpr_sdl.kb", "O kill(mary)"}, 0);
  CHECK(j["entailed"] == true);
  j = call_json({"kb", "entail", "--logic", "e", "--complete", kDir + "/gdpr_e.kb", "O kill(mary)"}, 1);
  CHECK(j["entailed"] == false);
  CHECK(j["verdict"] == "countermodel_found");
  CHECK(call({"kb", "entail", "--logic", "e", kDir + "/gdpr_e.kb", "O kill(john)"}).code == 3);
  CHECK(call({"kb", "entail", "--logic", "e", kDir + "/gdpr_e.kb"}).code == 3);
}

TEST_CASE("kb comply") {
  const json j = call_json({"kb", "comply", "--logic", "sdl", "--complete", kDir + "/gdpr_sdl.kb"}, 1);
  CHECK(j["compliant"] == false);
  CHECK(j["violations"].size() == 1);
  CHECK(j["detached"].size() == 2);
  const json ok = call_json({"kb", "comply", "--logic", "e", kDir + "/gdpr_e.kb"}, 0);
  CHECK(ok["compliant"] == true);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == 3);
  CHECK(call({"frobnicate"}).code == 3);
  CHECK(call({"check", "--bound", "x", "p"}).code == 3);
  CHECK(call({"kb"}).code == 3);
  const Result help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("translate") != std::string::npos);
}

TEST_CASE("the installed binary") {
  const std::string cmd = std::string(DEON_BINARY) + " check --logic e --complete 'O{p | p}' > /dev/null";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  const std::string neg = std::string(DEON_BINARY) + " check --logic e 'O{p | q}' > /dev/null";
  CHECK(WEXITSTATUS(std::system(neg.c_str())) == 1);
}
