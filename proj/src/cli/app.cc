// Copyright 2026 The psalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "psa/cli/app.h"

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "psa/base/exception.h"
#include "psa/cli/bench.h"
#include "psa/cli/he_estimate.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace psa::cli {
namespace {

constexpr const char* kLogEnv = "PSA_LOG_LEVEL";

void ConfigureLogging() {
  auto logger = spdlog::stderr_color_mt("psa");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv(kLogEnv)) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

RandomSource MakeRng(const std::optional<std::string>& seed,
                     std::string_view label) {
  if (seed) return RandomSource(ParseSeed(*seed)).Derive(label);
  return RandomSource::FromOsEntropy();
}

net::EndpointPtr MaybeThrottle(net::EndpointPtr ep, double bps) {
  if (bps > 0) return net::Throttle(std::move(ep), bps);
  return ep;
}

net::EndpointPtr Accept(const std::string& addr, double bps) {
  auto [host, port] = net::ParseAddress(addr);
  net::TcpListener listener(host, port);
  spdlog::info("listening on {}", addr);
  return MaybeThrottle(listener.Accept(), bps);
}

net::EndpointPtr Connect(const std::string& addr, double bps, int wait_ms) {
  auto [host, port] = net::ParseAddress(addr);
  spdlog::info("connecting to {}", addr);
  return MaybeThrottle(
      net::TcpConnect(host, port, std::chrono::milliseconds(wait_ms)), bps);
}

align::Dataset LoadInput(const RunConfig& cfg) {
  align::Dataset d =
      align::LoadDataset(cfg.dataset, cfg.attr_width.value_or(0));
  if (cfg.attr_width && !d.empty() && d.attr_width() != *cfg.attr_width) {
    PSA_THROW(InvalidArgument, "{} has {}-byte attributes, expected {}",
              cfg.dataset, d.attr_width(), *cfg.attr_width);
  }
  return d;
}

std::string IntersectionCsv(const std::vector<std::string>& ids) {
  std::string out = "row,id\n";
  for (size_t i = 0; i < ids.size(); ++i) {
    out += fmt::format("{},{}\n", i, ids[i]);
  }
  return out;
}

void Report(const RunConfig& cfg, const align::PartyReport& r,
            const std::string& intersection_file) {
  const std::string json =
      StatsJson(cfg.role, cfg.level, r, intersection_file);
  std::cout << json << std::endl;
  if (!cfg.stats_out.empty()) align::WriteFile(cfg.stats_out, json + "\n");
}

template <typename T>
std::vector<T> ParseList(const std::vector<std::string>& items,
                         T (*parse)(const std::string&)) {
  std::vector<T> out;
  for (const auto& s : items) out.push_back(parse(s));
  return out;
}

}  // namespace

Role ParseRole(std::string_view name) {
  if (name == "p1") return Role::kP1;
  if (name == "p2") return Role::kP2;
  if (name == "server") return Role::kServer;
  PSA_THROW(InvalidArgument, "unknown role '{}'", name);
}

const char* RoleName(Role r) {
  switch (r) {
    case Role::kP1:
      return "p1";
    case Role::kP2:
      return "p2";
    case Role::kServer:
      return "server";
  }
  return "?";
}

void RunConfig::Validate() const {
  PSA_ENFORCE(level == 1 || level == 2, "level must be 1 or 2, got {}", level);
  PSA_ENFORCE(!seed || test_mode, "--seed is only accepted with --test-mode");
  PSA_ENFORCE(label_bits >= 8 && label_bits <= 128 && label_bits % 8 == 0,
              "label bits must be a multiple of 8 in [8, 128]");
  PSA_ENFORCE(bits_per_second >= 0, "bandwidth must be non-negative");
  if (level == 1) {
    PSA_ENFORCE(role != Role::kServer, "level 1 has no server role");
    PSA_ENFORCE(!p1p2.empty(), "level 1 needs --p1p2");
    PSA_ENFORCE(dealer_seed.has_value(),
                "level 1 needs --dealer-seed for the VOLE correlation");
  } else {
    PSA_ENFORCE(!p1p2.empty() && !p1_server.empty() && !p2_server.empty(),
                "level 2 needs --p1p2, --p1-server and --p2-server");
  }
  if (ot_mode == ot::OtMode::kDealer) {
    PSA_ENFORCE(dealer_seed.has_value(), "dealer OT mode needs --dealer-seed");
  }
  if (role != Role::kServer) {
    PSA_ENFORCE(!dataset.empty(), "{} needs --data", RoleName(role));
    PSA_ENFORCE(!shares_out.empty(), "{} needs --out", RoleName(role));
  }
}

Seed ParseSeed(const std::string& text) {
  if (text.size() == 64 &&
      text.find_first_not_of("0123456789abcdefABCDEF") == std::string::npos) {
    Bytes b = FromHex(text);
    Seed s{};
    std::copy(b.begin(), b.end(), s.begin());
    return s;
  }
  return SeedFromString(text);
}

size_t ParseSize(const std::string& text) {
  try {
    size_t pos = 0;
    if (text.rfind("2^", 0) == 0) {
      const unsigned long e = std::stoul(text.substr(2), &pos);
      if (pos == text.size() - 2 && e < 48) return size_t{1} << e;
    } else {
      const unsigned long long v = std::stoull(text, &pos);
      if (pos == text.size()) return v;
    }
  } catch (const std::logic_error&) {
  }
  PSA_THROW(InvalidArgument, "bad size '{}'", text);
}

double ParseBandwidth(const std::string& text) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    std::string unit = text.substr(pos);
    if (unit.ends_with("bit/s")) {
      unit.resize(unit.size() - 5);
    } else if (unit.ends_with("bit")) {
      unit.resize(unit.size() - 3);
    }
    if (unit == "k" || unit == "K") {
      v *= 1e3;
    } else if (unit == "M") {
      v *= 1e6;
    } else if (unit == "G") {
      v *= 1e9;
    } else if (!unit.empty()) {
      throw std::invalid_argument(unit);
    }
    if (v >= 0) return v;
  } catch (const std::logic_error&) {
  }
  PSA_THROW(InvalidArgument, "bad bandwidth '{}'", text);
}

std::string StatsJson(Role role, int level, const align::PartyReport& r,
                      const std::string& intersection_file) {
  nlohmann::ordered_json j;
  j["role"] = RoleName(role);
  j["level"] = level;
  j["c"] = r.c;
  j["n"] = r.n;
  j["m"] = r.m;
  j["bytes_sent"] = r.stats.bytes_sent;
  j["bytes_received"] = r.stats.bytes_received;
  j["online_ms"] = r.online_ms;
  j["offline_ms"] = r.offline_ms;
  auto sent = nlohmann::ordered_json::object();
  auto received = nlohmann::ordered_json::object();
  for (size_t t = 1; t < net::kMsgTypeCount; ++t) {
    const auto type = static_cast<net::MsgType>(t);
    if (uint64_t k = r.stats.frames_sent(type)) {
      sent[std::string(net::MsgTypeName(type))] = k;
    }
    if (uint64_t k = r.stats.frames_received(type)) {
      received[std::string(net::MsgTypeName(type))] = k;
    }
  }
  j["frames_sent"] = sent;
  j["frames_received"] = received;
  if (!intersection_file.empty()) j["intersection_file"] = intersection_file;
  return j.dump();
}

int CmdRun(const RunConfig& cfg) {
  cfg.Validate();
  RandomSource rng = MakeRng(cfg.seed, RoleName(cfg.role));
  align::ProtocolConfig pc;
  pc.label_bits = cfg.label_bits;
  pc.ot_mode = cfg.ot_mode;
  if (cfg.dealer_seed) pc.dealer_seed = ParseSeed(*cfg.dealer_seed);
  pc.concurrent = cfg.concurrent;
  const double bps = cfg.bits_per_second;
  const int wait = cfg.connect_timeout_ms;

  if (cfg.role == Role::kServer) {
    auto [h1, port1] = net::ParseAddress(cfg.p1_server);
    auto [h2, port2] = net::ParseAddress(cfg.p2_server);
    net::TcpListener l1(h1, port1), l2(h2, port2);
    auto p1 = MaybeThrottle(l1.Accept(), bps);
    auto p2 = MaybeThrottle(l2.Accept(), bps);
    auto out = align::RunLevel2Server(*p1, *p2, pc, rng);
    Report(cfg, out.report, "");
    return kExitOk;
  }

  const align::Dataset data = LoadInput(cfg);
  align::PartyOutput out;
  if (cfg.level == 1) {
    if (cfg.role == Role::kP1) {
      auto peer = Accept(cfg.p1p2, bps);
      out = align::RunLevel1P1(data, *peer, pc, rng);
    } else {
      auto peer = Connect(cfg.p1p2, bps, wait);
      out = align::RunLevel1P2(data, *peer, pc, rng);
    }
  } else {
    const bool p1 = cfg.role == Role::kP1;
    auto peer = p1 ? Accept(cfg.p1p2, bps) : Connect(cfg.p1p2, bps, wait);
    auto server =
        Connect(p1 ? cfg.p1_server : cfg.p2_server, bps, wait);
    out = align::RunLevel2Owner(p1 ? align::Owner::kP1 : align::Owner::kP2,
                                data, *peer, *server, pc, rng);
  }
  align::SaveShares(out.shares, cfg.shares_out);
  std::string inter_file;
  if (cfg.level == 1 && cfg.role == Role::kP1) {
    inter_file = cfg.intersection_out.empty()
                     ? cfg.shares_out + ".intersection.csv"
                     : cfg.intersection_out;
    align::WriteFile(inter_file, IntersectionCsv(out.intersection));
  }
  Report(cfg, out.report, inter_file);
  return kExitOk;
}

namespace {

void AddGen(CLI::App& app, std::function<int()>& action) {
  auto* cmd = app.add_subcommand("gen", "Generate two synthetic datasets");
  struct Opts {
    size_t n = 1024, m = 1024, width = 16;
    double alpha = 0.5;
    std::optional<std::string> seed;
    std::string out1, out2;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--n", o->n, "P1 record count")->required();
  cmd->add_option("--m", o->m, "P2 record count")->required();
  cmd->add_option("--alpha", o->alpha, "Shared fraction of min(n, m)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--attr-width", o->width, "Attribute bytes per record");
  cmd->add_option("--seed", o->seed, "Deterministic generation seed");
  cmd->add_option("--out-p1", o->out1, "P1 dataset path")->required();
  cmd->add_option("--out-p2", o->out2, "P2 dataset path")->required();
  cmd->callback([o, &action] {
    action = [o] {
      RandomSource rng = MakeRng(o->seed, "gen");
      auto [a, b] = align::GenerateDatasets(o->n, o->m, o->alpha, o->width,
                                            rng);
      align::SaveDataset(a, o->out1);
      align::SaveDataset(b, o->out2);
      std::cout << fmt::format("wrote {} and {} records; join has {} rows\n",
                               a.size(), b.size(),
                               align::PlainInnerJoin(a, b).size());
      return kExitOk;
    };
  });
}

void AddRun(CLI::App& app, std::function<int()>& action) {
  auto* cmd = app.add_subcommand("run", "Run one party of the protocol");
  auto cfg = std::make_shared<RunConfig>();
  auto role = std::make_shared<std::string>();
  auto mode = std::make_shared<std::string>("dealer");
  auto bw = std::make_shared<std::string>("0");
  cmd->add_option("--role", *role, "p1, p2 or server")->required();
  cmd->add_option("--level", cfg->level, "Privacy level (1 or 2)");
  cmd->add_option("--p1p2", cfg->p1p2, "P1-P2 link (P1 listens)");
  cmd->add_option("--p1-server", cfg->p1_server,
                  "P1-server link (server listens)");
  cmd->add_option("--p2-server", cfg->p2_server,
                  "P2-server link (server listens)");
  cmd->add_option("--data", cfg->dataset, "Dataset CSV");
  cmd->add_option("--attr-width", cfg->attr_width,
                  "Expected attribute bytes");
  cmd->add_option("--label-bits", cfg->label_bits, "Wire label bits");
  cmd->add_option("--ot-mode", *mode, "group or dealer");
  cmd->add_option("--dealer-seed", cfg->dealer_seed,
                  "Seed shared with the trusted dealer");
  cmd->add_option("--seed", cfg->seed, "Local randomness (test mode only)");
  cmd->add_flag("--test-mode", cfg->test_mode, "Allow a fixed --seed");
  cmd->add_option("--bandwidth", *bw, "Throttle each link, bits/s");
  cmd->add_flag("--concurrent", cfg->concurrent,
                "Server runs both switching sessions in parallel");
  cmd->add_option("--out", cfg->shares_out, "Shares CSV to write");
  cmd->add_option("--intersection", cfg->intersection_out,
                  "Level-1 P1 intersection CSV");
  cmd->add_option("--stats", cfg->stats_out, "Also write stats JSON here");
  cmd->add_option("--connect-timeout-ms", cfg->connect_timeout_ms,
                  "How long to retry outgoing connections");
  cmd->callback([=, &action] {
    action = [=] {
      cfg->role = ParseRole(*role);
      cfg->ot_mode = ot::ParseOtMode(*mode);
      cfg->bits_per_second = ParseBandwidth(*bw);
      return CmdRun(*cfg);
    };
  });
}

void AddReveal(CLI::App& app, std::function<int()>& action) {
  auto* cmd = app.add_subcommand("reveal", "XOR two share files");
  auto a = std::make_shared<std::string>();
  auto b = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--p1-shares", *a, "P1 shares CSV")->required();
  cmd->add_option("--p2-shares", *b, "P2 shares CSV")->required();
  cmd->add_option("--out", *out, "Plaintext join CSV")->required();
  cmd->callback([=, &action] {
    action = [=] {
      auto rows = align::RevealJoin(align::LoadShares(*a),
                                    align::LoadShares(*b));
      align::WriteFile(*out, align::JoinToCsv(rows));
      std::cout << fmt::format("revealed {} rows\n", rows.size());
      return kExitOk;
    };
  });
}

void AddVerify(CLI::App& app, std::function<int()>& action) {
  auto* cmd = app.add_subcommand(
      "verify", "Compare a revealed join with the plaintext join");
  auto join = std::make_shared<std::string>();
  auto d1 = std::make_shared<std::string>();
  auto d2 = std::make_shared<std::string>();
  cmd->add_option("--join", *join, "Revealed join CSV")->required();
  cmd->add_option("--p1-data", *d1, "P1 dataset CSV")->required();
  cmd->add_option("--p2-data", *d2, "P2 dataset CSV")->required();
  cmd->callback([=, &action] {
    action = [=] {
      auto rows = align::ParseJoinCsv(align::ReadFile(*join));
      auto want = align::PlainInnerJoin(align::LoadDataset(*d1),
                                        align::LoadDataset(*d2));
      const bool ok = align::MatchesJoin(rows, want);
      std::cout << fmt::format("verify: {} ({} rows, expected {})\n",
                               ok ? "PASS" : "FAIL", rows.size(),
                               want.size());
      return ok ? kExitOk : kExitVerifyFailed;
    };
  });
}

void AddEstimateHe(CLI::App& app, std::function<int()>& action) {
  auto* cmd = app.add_subcommand(
      "estimate-he", "Cost estimate for an HE-based inner join");
  auto sizes = std::make_shared<std::vector<std::string>>(
      std::vector<std::string>{"2^16", "2^18", "2^20"});
  auto bws = std::make_shared<std::vector<std::string>>(
      std::vector<std::string>{"1G"});
  auto alpha = std::make_shared<double>(0.5);
  auto model = std::make_shared<HeCostModel>();
  auto csv = std::make_shared<bool>(false);
  cmd->add_option("--n", *sizes, "Record counts");
  cmd->add_option("--alpha", *alpha, "Intersection fraction");
  cmd->add_option("--bandwidth", *bws, "Bandwidths, bits/s");
  cmd->add_option("--encrypt-ms", model->encrypt_ms);
  cmd->add_option("--scalar-mul-ms", model->scalar_mul_ms);
  cmd->add_option("--decrypt-ms", model->decrypt_ms);
  cmd->add_option("--keygen-ms", model->keygen_ms);
  cmd->add_option("--key-size", model->key_size_bits, "Ciphertext bits");
  cmd->add_flag("--csv", *csv, "CSV output");
  cmd->callback([=, &action] {
    action = [=] {
      std::cout << (*csv ? "n,alpha,bits_per_second,comm_mib,runtime_s\n"
                         : fmt::format("{:>9} {:>6} {:>12} {:>12} {:>12}\n",
                                       "n", "alpha", "bandwidth",
                                       "comm_MiB", "runtime_s"));
      for (size_t n : ParseList<size_t>(*sizes, ParseSize)) {
        for (double bw : ParseList<double>(*bws, ParseBandwidth)) {
          auto e = EstimateHe(n, *alpha, bw, *model);
          std::cout << (*csv ? fmt::format("{},{},{},{:.3f},{:.3f}\n", n,
                                           *alpha, bw, e.comm_mib(),
                                           e.runtime_s)
                             : fmt::format("{:>9} {:>6} {:>12g} {:>12.1f} "
                                           "{:>12.1f}\n",
                                           n, *alpha, bw, e.comm_mib(),
                                           e.runtime_s));
        }
      }
      return kExitOk;
    };
  });
}

void AddBench(CLI::App& app, std::function<int()>& action) {
  auto* cmd = app.add_subcommand("bench", "Benchmark tables");
  auto target = std::make_shared<std::string>("osn");
  auto sizes = std::make_shared<std::vector<std::string>>(
      std::vector<std::string>{"2^10", "2^12", "2^14"});
  auto bws = std::make_shared<std::vector<std::string>>(
      std::vector<std::string>{"0"});
  auto mode = std::make_shared<std::string>("dealer");
  auto opts = std::make_shared<BenchOptions>();
  auto seed = std::make_shared<std::optional<std::string>>();
  auto test_mode = std::make_shared<bool>(false);
  auto csv = std::make_shared<std::string>();
  cmd->add_option("--target", *target, "osn, psi or psa");
  cmd->add_option("--sizes", *sizes, "Sizes, e.g. 2^10 4096");
  cmd->add_option("--bandwidth", *bws, "Bandwidths, bits/s; 0 = unlimited");
  cmd->add_option("--level", opts->level, "PSA privacy level");
  cmd->add_option("--alpha", opts->alpha, "PSA/PSI overlap fraction");
  cmd->add_option("--ot-mode", *mode, "group or dealer");
  cmd->add_option("--attr-width", opts->attr_width);
  cmd->add_option("--label-bits", opts->label_bits);
  cmd->add_option("--seed", *seed, "Fixed randomness (test mode only)");
  cmd->add_flag("--test-mode", *test_mode);
  cmd->add_option("--csv", *csv, "Also write the table as CSV");
  cmd->callback([=, &action] {
    action = [=] {
      PSA_ENFORCE(!*seed || *test_mode,
                  "--seed is only accepted with --test-mode");
      const BenchTarget t = ParseBenchTarget(*target);
      opts->ot_mode = ot::ParseOtMode(*mode);
      RandomSource rng = MakeRng(*seed, "bench");
      opts->dealer_seed = rng.NextSeed();
      std::vector<BenchRow> rows;
      for (double bw : ParseList<double>(*bws, ParseBandwidth)) {
        for (size_t n : ParseList<size_t>(*sizes, ParseSize)) {
          BenchOptions o = *opts;
          o.bits_per_second = bw;
          rows.push_back(RunBench(t, n, o, rng));
          spdlog::info("bench {} size {} done", *target, n);
        }
      }
      std::cout << FormatBenchText(rows);
      if (!csv->empty()) align::WriteFile(*csv, FormatBenchCsv(rows));
      return kExitOk;
    };
  });
}

}  // namespace

int Main(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"Private set alignment"};
  app.require_subcommand(1);
  std::function<int()> action;
  AddGen(app, action);
  AddRun(app, action);
  AddReveal(app, action);
  AddVerify(app, action);
  AddEstimateHe(app, action);
  AddBench(app, action);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action();
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "protocol abort: " << e.what() << "\n";
    return kExitAbort;
  }
}

}  // namespace psa::cli
