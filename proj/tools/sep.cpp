#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sep/serialize.hpp"
#include "sep/tcp.hpp"
#include "sep/wire.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitTheoremMismatch = 3;
constexpr int kExitStatFail = 4;
constexpr int kExitTransport = 5;

int exit_code_for(const sep::Error& err) {
  switch (err.code()) {
    case sep::Errc::transport_failure:
    case sep::Errc::protocol_violation:
      return kExitTransport;
    default:
      return kExitInvalid;
  }
}

struct Options {
  std::string format = "text";
  sep::u64 modulus = 77;
  sep::u64 k = 3;
  sep::u64 e = 7;
  sep::u64 m = 2;
  sep::u64 value = 0;
  sep::u64 seed = 0;
  bool seed_given = false;
  sep::u64 trials = 60000;
  sep::u64 sessions = 1;
  sep::u64 timeout_ms = 10000;
  bool check = false;
  bool strict = false;
  std::string role;
  std::string alice_endpoint;
  std::string bob_endpoint;
  std::string re_endpoint;
  int listen_port = 0;
};

bool json_mode(const Options& opt) { return opt.format == "json"; }

void emit(const sep::Json& doc) { std::cout << doc.dump() << "\n"; }

sep::u64 effective_seed(Options& opt) {
  if (!opt.seed_given) {
    std::random_device rd;
    opt.seed = static_cast<sep::u64>(rd()) << 32 | rd();
    std::cerr << "sep: no seed given, using " << opt.seed << "\n";
  }
  return opt.seed;
}

sep::SessionConfig session_config(Options& opt) {
  sep::SessionConfig cfg;
  cfg.s = sep::factor_semiprime(opt.modulus);
  cfg.k = opt.k;
  cfg.e = opt.e;
  cfg.m = opt.m;
  cfg.master_seed = effective_seed(opt);
  cfg.sessions = opt.sessions;
  cfg.timeout = std::chrono::milliseconds(opt.timeout_ms);
  return cfg;
}

int cmd_roots(Options& opt) {
  sep::GameSetup setup{sep::factor_semiprime(opt.modulus), opt.k};
  sep::RootSet set = sep::kth_roots_mod_semiprime(opt.value, setup);
  if (set.roots.empty()) {
    std::cerr << "sep: " << opt.value << " is not a degree-" << opt.k
              << " power residue mod " << opt.modulus << "\n";
    return kExitInvalid;
  }
  if (json_mode(opt)) {
    emit(sep::Json{{"value", set.value},
                   {"k", set.k},
                   {"modulus", opt.modulus},
                   {"roots", set.roots}});
  } else {
    for (std::size_t i = 0; i < set.roots.size(); ++i) {
      std::cout << (i ? " " : "") << set.roots[i];
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_table(Options& opt) {
  sep::GameSetup setup = sep::validate_setup(opt.k, sep::factor_semiprime(opt.modulus));
  auto table = sep::residue_table(setup);
  if (json_mode(opt)) {
    sep::Json rows = sep::Json::array();
    for (const auto& row : table) {
      rows.push_back(sep::Json{{"n", row.value}, {"roots", row.roots}});
    }
    emit(rows);
  } else {
    for (const auto& row : table) {
      std::cout << row.value << ":";
      for (sep::u64 r : row.roots) std::cout << " " << r;
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_theorem(Options& opt) {
  sep::OutcomeDistribution state = sep::theorem_state(opt.k);
  sep::Rational marginal = sep::marginal_success(state, sep::Party::alice);
  bool checked = false;
  if (opt.check) {
    if (sep::enumerate_distribution(opt.k) != state) {
      std::cerr << "sep: enumeration disagrees with the closed form for k=" << opt.k << "\n";
      return kExitTheoremMismatch;
    }
    checked = true;
  }
  if (json_mode(opt)) {
    sep::Json doc{{"k", opt.k},
                  {"state", sep::distribution_json(state)},
                  {"marginal", sep::rational_json(marginal)}};
    if (opt.check) doc["checked"] = checked;
    emit(doc);
  } else {
    std::cout << sep::distribution_text(state) << " | marginal " << marginal.str() << "\n";
  }
  return kExitOk;
}

int cmd_run(Options& opt) {
  sep::SessionConfig cfg = session_config(opt);
  sep::SessionTranscript t = sep::drive_session(cfg, 0);
  if (json_mode(opt)) {
    emit(sep::transcript_json(t));
  } else {
    std::cout << sep::transcript_text(t);
  }
  return kExitOk;
}

int cmd_simulate(Options& opt) {
  if (opt.strict && !opt.seed_given) {
    std::cerr << "sep: --strict requires an explicit --seed (or SEP_SEED)\n";
    return kExitInvalid;
  }
  sep::SessionConfig cfg = session_config(opt);
  sep::Rng ca_rng(sep::stream_seed(sep::session_seed(cfg.master_seed, 0), sep::Stream::ca));
  sep::ProtocolParams params = sep::ca_setup(cfg.s, cfg.k, cfg.e, cfg.m, ca_rng);
  sep::REPolicy policy = sep::policy_for(params.setup);

  sep::TrialCounts counts = sep::monte_carlo(params, policy, opt.trials, cfg.master_seed);
  sep::OutcomeDistribution expected = sep::theorem_state(cfg.k);
  double statistic = sep::chi_square(counts, expected);
  int cells = 0;
  for (const sep::Rational* r : {&expected.yy, &expected.yn, &expected.ny, &expected.nn}) {
    if (r->num != 0) ++cells;
  }
  double threshold = sep::chi_square_threshold(cells - 1);
  bool pass = statistic < threshold;

  double trials = static_cast<double>(counts.trials());
  if (json_mode(opt)) {
    emit(sep::Json{{"N", cfg.s.n},
                   {"k", cfg.k},
                   {"trials", counts.trials()},
                   {"seed", cfg.master_seed},
                   {"counts", sep::counts_json(counts)},
                   {"frequencies",
                    sep::Json{{"yy", counts.yy / trials},
                              {"yn", counts.yn / trials},
                              {"ny", counts.ny / trials},
                              {"nn", counts.nn / trials}}},
                   {"expected", sep::distribution_json(expected)},
                   {"chi_square", statistic},
                   {"threshold", threshold},
                   {"verdict", pass ? "PASS" : "FAIL"}});
  } else {
    char freq[128];
    std::snprintf(freq, sizeof(freq), "%.5f %.5f %.5f %.5f", counts.yy / trials,
                  counts.yn / trials, counts.ny / trials, counts.nn / trials);
    char stat[64];
    std::snprintf(stat, sizeof(stat), "%.4f", statistic);
    std::cout << "trials " << counts.trials() << " seed " << cfg.master_seed << " N "
              << cfg.s.n << " k " << cfg.k << "\n"
              << "counts YY " << counts.yy << " YN " << counts.yn << " NY " << counts.ny
              << " NN " << counts.nn << "\n"
              << "freq " << freq << "\n"
              << "expected " << sep::distribution_text(expected) << "\n"
              << "chi_square " << stat << " threshold " << threshold << " "
              << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? kExitOk : kExitStatFail;
}

int serve_ca(Options& opt) {
  sep::SessionConfig cfg = session_config(opt);
  auto [alice_host, alice_port] = sep::parse_endpoint(opt.alice_endpoint);
  auto [bob_host, bob_port] = sep::parse_endpoint(opt.bob_endpoint);
  auto alice = sep::tcp_connect(alice_host, alice_port, cfg.timeout);
  auto bob = sep::tcp_connect(bob_host, bob_port, cfg.timeout);
  auto transcripts = sep::ca_role(*alice, *bob, cfg);
  if (json_mode(opt)) {
    if (transcripts.size() == 1) {
      emit(sep::transcript_json(transcripts.front()));
    } else {
      sep::Json docs = sep::Json::array();
      for (const auto& t : transcripts) docs.push_back(sep::transcript_json(t));
      emit(docs);
    }
  } else {
    for (const auto& t : transcripts) std::cout << sep::transcript_text(t);
  }
  return kExitOk;
}

int serve_re(Options& opt) {
  sep::Semiprime s = sep::factor_semiprime(opt.modulus);
  auto timeout = std::chrono::milliseconds(opt.timeout_ms);
  sep::TcpListener listener(static_cast<std::uint16_t>(opt.listen_port));
  std::cerr << "sep: listening on " << listener.port() << "\n";
  auto first = listener.accept(timeout);
  auto second = listener.accept(timeout);
  sep::re_role(*first, *second, s, effective_seed(opt), timeout);
  return kExitOk;
}

int serve_party(Options& opt, sep::u64 slot) {
  auto timeout = std::chrono::milliseconds(opt.timeout_ms);
  sep::TcpListener listener(static_cast<std::uint16_t>(opt.listen_port));
  std::cerr << "sep: listening on " << listener.port() << "\n";
  auto [re_host, re_port] = sep::parse_endpoint(opt.re_endpoint);
  auto ca = listener.accept(timeout);
  auto re = sep::tcp_connect(re_host, re_port, timeout);
  sep::party_role(*ca, *re, slot, timeout);
  return kExitOk;
}

int cmd_serve(Options& opt) {
  if (opt.role == "ca") return serve_ca(opt);
  if (opt.role == "re") return serve_re(opt);
  if (opt.role == "alice") return serve_party(opt, 0);
  if (opt.role == "bob") return serve_party(opt, 1);
  std::cerr << "sep: unknown role " << opt.role << "\n";
  return kExitInvalid;
}

void add_protocol_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--modulus,-N", opt.modulus, "semiprime modulus")->capture_default_str();
  cmd->add_option("--k", opt.k, "root degree")->capture_default_str();
  cmd->add_option("--e", opt.e, "public exponent")->capture_default_str();
  cmd->add_option("--m", opt.m, "secret message")->capture_default_str();
}

CLI::Option* add_seed_flag(CLI::App* cmd, Options& opt) {
  return cmd->add_option("--seed", opt.seed, "master seed (SEP_SEED as fallback)");
}

// --seed wins; SEP_SEED is the fallback; otherwise commands draw a random
// seed and say so on stderr.
void resolve_seed(Options& opt, bool flag_given) {
  opt.seed_given = flag_given;
  if (opt.seed_given) return;
  if (const char* env = std::getenv("SEP_SEED")) {
    opt.seed = std::strtoull(env, nullptr, 10);
    opt.seed_given = true;
  }
}

void add_format_flag(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulated entanglement protocol toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto* roots = app.add_subcommand("roots", "k-th roots of a value mod N");
  roots->add_option("--value", opt.value, "value to take roots of")->required();
  roots->add_option("--k", opt.k, "root degree")->capture_default_str();
  roots->add_option("--modulus,-N", opt.modulus, "semiprime modulus")->capture_default_str();
  add_format_flag(roots, opt);

  auto* table = app.add_subcommand("table", "all k-th power residues mod N with their roots");
  table->add_option("--k", opt.k, "root degree")->capture_default_str();
  table->add_option("--modulus,-N", opt.modulus, "semiprime modulus")->capture_default_str();
  add_format_flag(table, opt);

  auto* theorem = app.add_subcommand("theorem", "closed-form outcome distribution for degree k");
  theorem->add_option("--k", opt.k, "root degree")->capture_default_str();
  theorem->add_flag("--check", opt.check, "verify the closed form by exhaustive enumeration");
  add_format_flag(theorem, opt);

  auto* run = app.add_subcommand("run", "run one in-process session");
  add_protocol_flags(run, opt);
  auto* run_seed = add_seed_flag(run, opt);
  add_format_flag(run, opt);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo over many sessions");
  add_protocol_flags(simulate, opt);
  auto* sim_seed = add_seed_flag(simulate, opt);
  simulate->add_option("--trials", opt.trials, "number of sessions")->capture_default_str();
  simulate->add_flag("--strict", opt.strict, "refuse to run without an explicit seed");
  add_format_flag(simulate, opt);

  auto* serve = app.add_subcommand("serve", "host one protocol role over TCP");
  serve->add_option("--role", opt.role, "ca | re | alice | bob")->required();
  add_protocol_flags(serve, opt);
  auto* serve_seed = add_seed_flag(serve, opt);
  serve->add_option("--sessions", opt.sessions, "number of sessions to drive")
      ->capture_default_str();
  serve->add_option("--timeout-ms", opt.timeout_ms, "per-message timeout")
      ->capture_default_str();
  serve->add_option("--alice", opt.alice_endpoint, "alice endpoint (ca role)");
  serve->add_option("--bob", opt.bob_endpoint, "bob endpoint (ca role)");
  serve->add_option("--re", opt.re_endpoint, "root extractor endpoint (party roles)");
  serve->add_option("--listen", opt.listen_port, "listen port, 0 for automatic");
  add_format_flag(serve, opt);

  auto* party = app.add_subcommand("party", "host alice or bob over TCP");
  party->add_option("--role", opt.role, "alice | bob")
      ->required()
      ->check(CLI::IsMember({"alice", "bob"}));
  auto* party_seed = add_seed_flag(party, opt);
  party->add_option("--re", opt.re_endpoint, "root extractor endpoint")->required();
  party->add_option("--listen", opt.listen_port, "listen port, 0 for automatic");
  party->add_option("--timeout-ms", opt.timeout_ms, "per-message timeout")
      ->capture_default_str();
  add_format_flag(party, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  resolve_seed(opt, run_seed->count() > 0 || sim_seed->count() > 0 ||
                        serve_seed->count() > 0 || party_seed->count() > 0);

  try {
    if (roots->parsed()) return cmd_roots(opt);
    if (table->parsed()) return cmd_table(opt);
    if (theorem->parsed()) return cmd_theorem(opt);
    if (run->parsed()) return cmd_run(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (serve->parsed()) return cmd_serve(opt);
    if (party->parsed()) return cmd_serve(opt);
  } catch (const sep::Error& err) {
    std::cerr << "sep: " << err.what() << "\n";
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "sep: " << err.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
