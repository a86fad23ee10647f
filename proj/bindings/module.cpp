#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sep/serialize.hpp"
#include "sep/statekit.hpp"
#include "sep/wire.hpp"

namespace py = pybind11;

namespace {

sep::GameSetup setup_from(sep::u64 modulus, sep::u64 k) {
  return sep::GameSetup{sep::factor_semiprime(modulus), k};
}

py::dict transcript_dict(const sep::SessionTranscript& t) {
  py::dict alice, bob;
  auto party = [](const sep::PartyResult& r) {
    py::dict d;
    d["received"] = r.received;
    d["factor"] = r.factor_found ? py::cast(*r.factor_found) : py::none();
    d["recovered"] = r.recovered ? py::cast(*r.recovered) : py::none();
    d["bit"] = r.success() ? "Y" : "N";
    return d;
  };
  py::dict d;
  d["session_id"] = t.session_id;
  d["N"] = t.params.setup.s.n;
  d["k"] = t.params.setup.k;
  d["e"] = t.params.e;
  d["x"] = t.params.x;
  d["held"] = py::make_tuple(t.params.held_alice, t.params.held_bob);
  d["re_pair"] = py::make_tuple(t.re_pair.first, t.re_pair.second);
  d["alice"] = party(t.alice);
  d["bob"] = party(t.bob);
  d["outcome"] = sep::outcome_label(t.outcome);
  d["seed"] = t.seed;
  return d;
}

py::tuple rational_tuple(const sep::Rational& r) { return py::make_tuple(r.num, r.den); }

py::tuple distribution_tuple(const sep::OutcomeDistribution& d) {
  return py::make_tuple(rational_tuple(d.yy), rational_tuple(d.yn), rational_tuple(d.ny),
                        rational_tuple(d.nn));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "simulated entanglement protocol toolkit";

  py::register_exception<sep::Error>(m, "SepError");

  m.def("mulmod", &sep::mulmod, py::arg("a"), py::arg("b"), py::arg("n"));
  m.def("powmod", &sep::powmod, py::arg("base"), py::arg("exp"), py::arg("n"));
  m.def("gcd", &sep::gcd, py::arg("a"), py::arg("b"));
  m.def("invmod", &sep::invmod, py::arg("a"), py::arg("m"));
  m.def("crt_combine", &sep::crt_combine, py::arg("rp"), py::arg("p"), py::arg("rq"),
        py::arg("q"));
  m.def(
      "factor_semiprime",
      [](sep::u64 n) {
        sep::Semiprime s = sep::factor_semiprime(n);
        return py::make_tuple(s.p, s.q);
      },
      py::arg("n"));
  m.def(
      "euler_phi",
      [](sep::u64 n) { return sep::euler_phi(sep::factor_semiprime(n)); }, py::arg("n"));

  m.def(
      "kth_roots",
      [](sep::u64 value, sep::u64 k, sep::u64 modulus) {
        return sep::kth_roots_mod_semiprime(value, setup_from(modulus, k)).roots;
      },
      py::arg("value"), py::arg("k"), py::arg("modulus"));
  m.def(
      "residue_table",
      [](sep::u64 k, sep::u64 modulus) {
        sep::GameSetup setup = sep::validate_setup(k, sep::factor_semiprime(modulus));
        py::list rows;
        for (const auto& row : sep::residue_table(setup)) {
          rows.append(py::make_tuple(row.value, row.roots));
        }
        return rows;
      },
      py::arg("k"), py::arg("modulus"));
  m.def(
      "count_kth_roots",
      [](sep::u64 k, sep::u64 modulus) {
        return sep::count_kth_roots(k, sep::factor_semiprime(modulus));
      },
      py::arg("k"), py::arg("modulus"));

  m.def(
      "theorem_state",
      [](sep::u64 k) { return distribution_tuple(sep::theorem_state(k)); }, py::arg("k"),
      "((num, den) x 4) for outcomes (YY, YN, NY, NN)");
  m.def(
      "enumerate_distribution",
      [](sep::u64 k) { return distribution_tuple(sep::enumerate_distribution(k)); },
      py::arg("k"));
  m.def(
      "marginal_success",
      [](sep::u64 k, const std::string& party) {
        auto who = party == "bob" ? sep::Party::bob : sep::Party::alice;
        return rational_tuple(sep::marginal_success(sep::theorem_state(k), who));
      },
      py::arg("k"), py::arg("party") = "alice");

  m.def(
      "run_session",
      [](sep::u64 modulus, sep::u64 k, sep::u64 e, sep::u64 msg, sep::u64 seed,
         sep::u64 session_id) {
        sep::SessionConfig cfg;
        cfg.s = sep::factor_semiprime(modulus);
        cfg.k = k;
        cfg.e = e;
        cfg.m = msg;
        cfg.master_seed = seed;
        return transcript_dict(sep::drive_session(cfg, session_id));
      },
      py::arg("modulus") = 77, py::arg("k") = 3, py::arg("e") = 7, py::arg("m") = 2,
      py::arg("seed") = 0, py::arg("session_id") = 0);

  m.def(
      "monte_carlo",
      [](sep::u64 modulus, sep::u64 k, sep::u64 e, sep::u64 msg, sep::u64 trials,
         sep::u64 seed) {
        sep::Semiprime s = sep::factor_semiprime(modulus);
        sep::Rng ca_rng(sep::stream_seed(sep::session_seed(seed, 0), sep::Stream::ca));
        sep::ProtocolParams params = sep::ca_setup(s, k, e, msg, ca_rng);
        sep::TrialCounts counts =
            sep::monte_carlo(params, sep::policy_for(params.setup), trials, seed);
        py::dict d;
        d["yy"] = counts.yy;
        d["yn"] = counts.yn;
        d["ny"] = counts.ny;
        d["nn"] = counts.nn;
        d["trials"] = counts.trials();
        return d;
      },
      py::arg("modulus") = 77, py::arg("k") = 3, py::arg("e") = 7, py::arg("m") = 2,
      py::arg("trials") = 1000, py::arg("seed") = 0);

  m.def(
      "chi_square",
      [](sep::u64 yy, sep::u64 yn, sep::u64 ny, sep::u64 nn, sep::u64 k) {
        return sep::chi_square(sep::TrialCounts{yy, yn, ny, nn}, sep::theorem_state(k));
      },
      py::arg("yy"), py::arg("yn"), py::arg("ny"), py::arg("nn"), py::arg("k"));

  m.def(
      "encode_message",
      [](sep::u64 tag, sep::u64 session_id, const std::vector<sep::u64>& body) {
        sep::Message msg{static_cast<sep::MsgType>(tag), session_id, body};
        auto bytes = sep::encode(msg);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      },
      py::arg("tag"), py::arg("session_id"), py::arg("body"));
  m.def(
      "decode_message",
      [](const py::bytes& data) {
        std::string buf = data;
        sep::Message msg = sep::decode(
            {reinterpret_cast<const std::uint8_t*>(buf.data()), buf.size()});
        return py::make_tuple(static_cast<sep::u64>(msg.type), msg.session_id, msg.body);
      },
      py::arg("data"));

  m.attr("__version__") = "0.1.0";
}
