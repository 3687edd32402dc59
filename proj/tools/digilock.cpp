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

// digilock: operator CLI over the C API.
//
//   digilock provision --store DIR --provider-key-file FILE
//   digilock register  --store DIR --user ID --key-file FILE --phrase TEXT
//   digilock access    --store DIR --user ID --key-file FILE --provider-key-file FILE --phrase TEXT
//   digilock vault put|get|list ...   (access flags, plus --name / --in / --out)
//   digilock simulate  --scenario NAME [--variant V] [--seed N] [--trace-out FILE]
//
// Secrets are only ever read from files. The exit status is the dl_status
// value (0 success, 1 usage, 2-7 the documented protocol failures).

#include "digilock/digilock.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct BufferDeleter {
  void operator()(dl_buffer* b) const noexcept { dl_buffer_free(b); }
};
struct StoreDeleter {
  void operator()(dl_store* s) const noexcept { dl_store_close(s); }
};
struct SessionDeleter {
  void operator()(dl_session* s) const noexcept { dl_session_close(s); }
};
struct OutcomeDeleter {
  void operator()(dl_outcome* o) const noexcept { dl_outcome_free(o); }
};
using Buffer = std::unique_ptr<dl_buffer, BufferDeleter>;
using Store = std::unique_ptr<dl_store, StoreDeleter>;
using Session = std::unique_ptr<dl_session, SessionDeleter>;
using Outcome = std::unique_ptr<dl_outcome, OutcomeDeleter>;

struct Options {
  std::string output = "text";
  std::string store;
  std::string user;
  std::string key_file;
  std::string provider_key_file;
  std::string phrase;
  std::uint64_t timeout_ms = 5000;
  std::string name;
  std::string in_file;
  std::string out_file;
  std::string scenario;
  std::string variant;
  std::optional<std::uint64_t> seed;
  std::string trace_out;
  std::string scenario_file;
};

// Thrown for conditions the C API never sees, such as unreadable inputs.
struct CliError {
  dl_status status;
  std::string message;
};

bool json_output(const Options& o) { return o.output == "json"; }

std::string json_escape(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    default:
      if (c < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out += buf;
      } else {
        out.push_back(static_cast<char>(c));
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> read_binary(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CliError{DL_ERR_IO, std::string("cannot read ") + what + " " + path};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary(const std::string& path, const std::uint8_t* data, std::size_t len) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw CliError{DL_ERR_IO, "cannot write " + path};
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
  if (!out)
    throw CliError{DL_ERR_IO, "short write to " + path};
}

// Prints the failure in the selected format and returns it as the exit code.
int report_failure(const Options& o, dl_status st, const std::string& detail) {
  if (json_output(o)) {
    std::cout << "{\"status\":\"" << dl_status_name(st) << "\",\"code\":" << static_cast<int>(st)
              << ",\"message\":\"" << json_escape(detail) << "\"}\n";
  } else {
    std::cerr << "digilock: " << (detail.empty() ? dl_status_name(st) : detail) << "\n";
  }
  return static_cast<int>(st);
}

void check(dl_status st) {
  if (st != DL_OK)
    throw CliError{st, dl_last_error()};
}

Store open_store(const Options& o) {
  if (o.store.empty())
    throw CliError{DL_ERR_USAGE, "--store is required (or set DIGILOCK_STORE)"};
  dl_store* raw = nullptr;
  check(dl_store_open(o.store.c_str(), &raw));
  return Store(raw);
}

int cmd_provision(const Options& o) {
  auto r = read_binary(o.provider_key_file, "provider key file");
  auto store = open_store(o);
  char hex[65];
  check(dl_provision(store.get(), r.data(), r.size(), hex));
  if (json_output(o))
    std::cout << "{\"status\":\"OK\",\"h_r\":\"" << hex << "\"}\n";
  else
    std::cout << "h_r " << hex << "\n";
  return 0;
}

int cmd_register(const Options& o) {
  auto k = read_binary(o.key_file, "key file");
  auto store = open_store(o);
  check(dl_register(store.get(), o.user.c_str(), k.data(), k.size(),
                    reinterpret_cast<const std::uint8_t*>(o.phrase.data()), o.phrase.size()));
  if (json_output(o))
    std::cout << "{\"status\":\"OK\",\"user\":\"" << json_escape(o.user) << "\"}\n";
  else
    std::cout << "registered " << o.user << "\n";
  return 0;
}

Session access(const Options& o, const Store& store) {
  auto k = read_binary(o.key_file, "key file");
  auto r = read_binary(o.provider_key_file, "provider key file");
  dl_session* raw = nullptr;
  check(dl_access(store.get(), o.user.c_str(), k.data(), k.size(), r.data(), r.size(),
                  reinterpret_cast<const std::uint8_t*>(o.phrase.data()), o.phrase.size(),
                  o.timeout_ms, &raw));
  return Session(raw);
}

int cmd_access(const Options& o) {
  auto store = open_store(o);
  try {
    auto session = access(o, store);
  } catch (const CliError& e) {
    if (!json_output(o))
      std::cout << "DENIED " << dl_status_name(e.status) << "\n";
    throw;
  }
  if (json_output(o))
    std::cout << "{\"status\":\"OK\",\"locker_opened\":true}\n";
  else
    std::cout << "OPEN\n";
  return 0;
}

int cmd_vault_put(const Options& o) {
  auto doc = read_binary(o.in_file, "input file");
  auto store = open_store(o);
  auto session = access(o, store);
  check(dl_vault_put(session.get(), o.name.c_str(), doc.data(), doc.size()));
  if (json_output(o))
    std::cout << "{\"status\":\"OK\",\"name\":\"" << json_escape(o.name) << "\",\"bytes\":" << doc.size()
              << "}\n";
  else
    std::cout << "stored " << o.name << " (" << doc.size() << " bytes)\n";
  return 0;
}

int cmd_vault_get(const Options& o) {
  auto store = open_store(o);
  auto session = access(o, store);
  dl_buffer* raw = nullptr;
  check(dl_vault_get(session.get(), o.name.c_str(), &raw));
  Buffer doc(raw);
  if (!o.out_file.empty()) {
    write_binary(o.out_file, dl_buffer_data(doc.get()), dl_buffer_size(doc.get()));
  } else {
    std::cout.write(reinterpret_cast<const char*>(dl_buffer_data(doc.get())),
                    static_cast<std::streamsize>(dl_buffer_size(doc.get())));
    std::cout.flush();
  }
  return 0;
}

int cmd_vault_list(const Options& o) {
  auto store = open_store(o);
  auto session = access(o, store);
  dl_buffer* raw = nullptr;
  check(dl_vault_list(session.get(), &raw));
  Buffer names(raw);
  std::string text(reinterpret_cast<const char*>(dl_buffer_data(names.get())),
                   dl_buffer_size(names.get()));
  if (!json_output(o)) {
    std::cout << text;
    return 0;
  }
  std::cout << "{\"status\":\"OK\",\"documents\":[";
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    std::cout << (first ? "" : ",") << "\"" << json_escape(line) << "\"";
    first = false;
  }
  std::cout << "]}\n";
  return 0;
}

int cmd_simulate(const Options& o) {
  dl_outcome* raw = nullptr;
  if (!o.scenario_file.empty()) {
    auto text = read_binary(o.scenario_file, "scenario file");
    std::string json(text.begin(), text.end());
    check(dl_simulate_json(json.c_str(), &raw));
  } else {
    if (o.scenario.empty())
      throw CliError{DL_ERR_USAGE, "--scenario or --scenario-file is required"};
    check(dl_simulate(o.scenario.c_str(), o.variant.empty() ? nullptr : o.variant.c_str(),
                      o.seed ? 1 : 0, o.seed.value_or(0), o.timeout_ms, &raw));
  }
  Outcome outcome(raw);

  if (!o.trace_out.empty()) {
    dl_buffer* trace_raw = nullptr;
    check(dl_outcome_trace_jsonl(outcome.get(), &trace_raw));
    Buffer trace(trace_raw);
    write_binary(o.trace_out, dl_buffer_data(trace.get()), dl_buffer_size(trace.get()));
  }

  bool expected = dl_outcome_matches_expected(outcome.get()) != 0;
  if (json_output(o)) {
    dl_buffer* json_raw = nullptr;
    check(dl_outcome_json(outcome.get(), &json_raw));
    Buffer json(json_raw);
    std::cout.write(reinterpret_cast<const char*>(dl_buffer_data(json.get())),
                    static_cast<std::streamsize>(dl_buffer_size(json.get())));
    std::cout << "\n";
  } else {
    std::cout << "locker_opened " << (dl_outcome_locker_opened(outcome.get()) ? "true" : "false")
              << "\nfailure_reason " << dl_outcome_failure_reason(outcome.get()) << "\nverdict "
              << (expected ? "expected" : "UNEXPECTED") << "\n";
  }
  return expected ? 0 : static_cast<int>(DL_ERR_SCENARIO_MISMATCH);
}

void add_store(CLI::App* cmd, Options& o) {
  cmd->add_option("--store", o.store, "Locker store directory")->envname("DIGILOCK_STORE");
}

void add_access_flags(CLI::App* cmd, Options& o) {
  add_store(cmd, o);
  cmd->add_option("--user", o.user, "User id")->required();
  cmd->add_option("--key-file", o.key_file, "File holding the user key K_i")->required();
  cmd->add_option("--provider-key-file", o.provider_key_file, "File holding the provider key R")
      ->required();
  cmd->add_option("--phrase", o.phrase, "The secret phrase the user expects to see")->required();
  cmd->add_option("--timeout-ms", o.timeout_ms, "Acknowledgement deadline")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{86400000}));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"DigiLock locker: provisioning, registration, access, vault and attack simulation"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--output", o.output, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* provision = app.add_subcommand("provision", "Create a locker store holding h(R)");
  add_store(provision, o);
  provision->add_option("--provider-key-file", o.provider_key_file, "File holding R")->required();

  auto* reg = app.add_subcommand("register", "Register a user");
  add_store(reg, o);
  reg->add_option("--user", o.user, "User id")->required();
  reg->add_option("--key-file", o.key_file, "File holding K_i")->required();
  reg->add_option("--phrase", o.phrase, "Secret phrase m")->required();

  auto* acc = app.add_subcommand("access", "Run one locker access session");
  add_access_flags(acc, o);

  auto* vault = app.add_subcommand("vault", "Documents behind an opened locker");
  vault->require_subcommand(1);
  auto* put = vault->add_subcommand("put", "Store a document");
  add_access_flags(put, o);
  put->add_option("--name", o.name, "Document name")->required();
  put->add_option("--in", o.in_file, "File to store")->required();
  auto* get = vault->add_subcommand("get", "Fetch a document");
  add_access_flags(get, o);
  get->add_option("--name", o.name, "Document name")->required();
  get->add_option("--out", o.out_file, "Write here instead of stdout");
  auto* list = vault->add_subcommand("list", "List document names");
  add_access_flags(list, o);

  auto* simulate = app.add_subcommand("simulate", "Run a simulated honest or attack scenario");
  simulate
      ->add_option("--scenario", o.scenario, "Scenario name")
      ->check(CLI::IsMember({"honest", "replay", "impersonation", "repudiation-user",
                             "repudiation-provider", "tamper"}));
  simulate->add_option("--variant", o.variant, "tamper: prf|challenge|ack; others: control");
  simulate->add_option("--seed", o.seed, "64-bit seed for a reproducible run");
  simulate->add_option("--trace-out", o.trace_out, "Write the JSON-lines trace here");
  simulate->add_option("--timeout-ms", o.timeout_ms, "Acknowledgement deadline")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{86400000}));
  simulate->add_option("--scenario-file", o.scenario_file, "JSON scenario definition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(DL_ERR_USAGE);
  }

  try {
    if (*provision)
      return cmd_provision(o);
    if (*reg)
      return cmd_register(o);
    if (*acc)
      return cmd_access(o);
    if (*put)
      return cmd_vault_put(o);
    if (*get)
      return cmd_vault_get(o);
    if (*list)
      return cmd_vault_list(o);
    if (*simulate)
      return cmd_simulate(o);
  } catch (const CliError& e) {
    return report_failure(o, e.status, e.message);
  }
  return static_cast<int>(DL_ERR_USAGE);
}
