// Copyright 2026 The DigiLock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = std::string(DIGILOCK_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
    out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

struct Workspace {
  fs::path dir;
  Workspace() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("digilock-cli-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir);
    write("k", "user key bytes");
    write("r", "provider key bytes");
    write("bad", "not the key");
    write("doc", "document body");
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  void write(const std::string& name, const std::string& body) const {
    std::ofstream(dir / name, std::ios::binary) << body;
  }
  std::string file(const std::string& name) const { return (dir / name).string(); }
  std::string store() const { return "--store " + (dir / "store").string(); }
};

} // namespace

TEST_CASE("cli lifecycle and exit codes") {
  Workspace w;
  auto s = w.store();
  auto r = run("provision " + s + " --provider-key-file " + w.file("r"));
  CHECK(r.code == 0);
  CHECK(run("provision " + s + " --provider-key-file " + w.file("r")).code == 2);
  auto reg = "register " + s + " --user alice --key-file " + w.file("k") + " --phrase 'my phrase'";
  CHECK(run(reg).code == 0);
  CHECK(run(reg).code == 3);

  auto acc = [&](const std::string& k, const std::string& rr) {
    return "access " + s + " --user alice --key-file " + w.file(k) + " --provider-key-file " +
           w.file(rr) + " --phrase 'my phrase'";
  };
  auto ok = run(acc("k", "r"));
  CHECK(ok.code == 0);
  CHECK(ok.out == "OPEN\n");
  CHECK(run(acc("bad", "r")).code == 4);
  CHECK(run(acc("k", "bad")).code == 5);

  auto vault = [&](const std::string& sub) {
    return "vault " + sub + " " + s + " --user alice --key-file " + w.file("k") +
           " --provider-key-file " + w.file("r") + " --phrase 'my phrase'";
  };
  CHECK(run(vault("put") + " --name doc1 --in " + w.file("doc")).code == 0);
  auto got = run(vault("get") + " --name doc1");
  CHECK(got.code == 0);
  CHECK(got.out == "document body");
  CHECK(run(vault("get") + " --name nothing").code == 7);
  auto list = run(vault("list"));
  CHECK(list.code == 0);
  CHECK(list.out == "doc1\n");
}

TEST_CASE("cli provision prints h(R)") {
  Workspace w;
  auto r = run("provision " + w.store() + " --provider-key-file " + w.file("r"));
  REQUIRE(r.code == 0);
  // sha256("provider key bytes"), computed independently.
  CHECK(r.out.find("5a3ab9506f4b59845e0b041c44611c41dca49e7d805115d937cbf654ee5d318a") != std::string::npos);
}

TEST_CASE("cli usage errors exit 1") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("simulate --scenario nope").code == 1);
}

TEST_CASE("cli simulate") {
  Workspace w;
  auto a = run("simulate --scenario honest --seed 42 --trace-out " + w.file("t1"));
  auto b = run("simulate --scenario honest --seed 42 --trace-out " + w.file("t2"));
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  std::ifstream f1(w.file("t1")), f2(w.file("t2"));
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK_FALSE(s1.str().empty());
  CHECK(s1.str() == s2.str());
  for (auto sc : {"replay", "impersonation", "repudiation-user", "repudiation-provider"})
    CHECK_MESSAGE(run(std::string("simulate --scenario ") + sc + " --seed 1").code == 0, sc);
  CHECK(run("simulate --scenario tamper --variant ack --seed 1").code == 0);
  auto j = run("--output json simulate --scenario replay --seed 1");
  CHECK(j.out.find("\"failure_reason\":\"Timeout\"") != std::string::npos);
  // An honest run with a deadline shorter than one round trip does not open.
  CHECK(run("simulate --scenario honest --seed 1 --timeout-ms 1").code == 11);
  w.write("sc.json", R"({"scenario":"tamper","variant":"prf","seed":3,"tamper_bit":17})");
  CHECK(run("simulate --scenario-file " + w.file("sc.json")).code == 0);
}
