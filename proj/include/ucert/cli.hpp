#ifndef UCERT_CLI_HPP
#define UCERT_CLI_HPP

// Command-line frontend. dispatch() is the whole program; main() only
// forwards to it, so tests can drive it in-process.
//
// Exit codes: 0 certified / success, 1 refuted, 2 inconclusive,
// 3 input error (bad flags, unsupported q, malformed facts file).

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ucert/certify.hpp"

namespace ucert::cli {

inline constexpr int kOk = 0;
inline constexpr int kRefuted = 1;
inline constexpr int kInconclusive = 2;
inline constexpr int kInputError = 3;

struct RunConfig {
  std::string subcommand;
  std::uint64_t q = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string facts;
  std::string module = "qb";
  bool check_2transitive = false;
  bool verbose = false;
};

inline json unital_json(const Unital& u) {
  json pts = json::array();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto k = u.point(i).key();
    pts.push_back({k.c[0], k.c[1], k.c[2]});
  }
  return json{{"q", u.q()}, {"n", u.size()}, {"points", std::move(pts)}};
}

inline json census_json(const TraceCensus& c) {
  return json{{"r", c.r}, {"threshold_holds", c.threshold_holds}, {"values", c.values}};
}

inline json group_json(std::uint64_t q, bool check_2transitive, bool& ok) {
  const Unital u = enumerate_unital(q);
  const GeneratorSet gs = su3_generators(q);
  const PermGroup g(u.size(), action_on_unital(gs, u));
  const std::uint64_t z = center_order(q);
  const std::uint64_t psu = su3_order_formula(q) / z;
  json j;
  j["q"] = q;
  j["su3_order"] = su3_order_formula(q);
  j["center"] = z;
  j["psu3_order"] = psu;
  j["computed_order"] = g.order().str();
  j["order_matches"] = g.order() == psu;
  j["base"] = g.base();
  j["census"] = census_json(trace_census(q));
  ok = g.order() == psu;
  if (check_2transitive) {
    const auto sizes = stabilizer_orbit_sizes(g, 0);
    const big_int idx = stabilizer_index(g, 0);
    const bool dt = sizes == std::vector<std::size_t>{1, u.size() - 1};
    j["transitive"] = is_transitive(g);
    j["orbit_sizes"] = sizes;
    j["stabilizer_index"] = idx.str();
    j["doubly_transitive"] = dt;
    ok = ok && dt && idx == u.size();
  }
  return j;
}

inline json traces_json(std::uint64_t q) {
  const TraceCensus c = trace_census(q);
  json w = json::array();
  for (std::uint64_t M = 1; M + 2 <= q; ++M) {
    const EscapeResult e = escape_witness(M, q);
    json x{{"M", M}};
    if (e.witness) {
      x["t"] = *e.witness;
      x["t_pow_M"] = e.power;
    } else {
      x["t"] = nullptr;
      x["exhaustive_failure"] = true;
    }
    w.push_back(std::move(x));
  }
  return json{{"q", q}, {"census", census_json(c)}, {"escape_witnesses", std::move(w)}};
}

namespace detail {

inline bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

// Wall-clock data stays out of the payload so that identical runs are
// byte-identical; it goes to <path>.meta.json instead.
inline void write_meta(const std::string& path, const RunConfig& cfg, double seconds, std::ostream& err) {
  json m{{"command", cfg.subcommand}, {"q", cfg.q}, {"seed", cfg.seed}, {"wall_seconds", seconds}};
  if (!cfg.facts.empty()) m["facts"] = cfg.facts;
  write_file(path + ".meta.json", m.dump(2) + "\n", err);
}

inline bool supported(const std::string& sub, std::uint64_t q) {
  static const std::set<std::uint64_t> all{4, 8, 16}, small{4, 8};
  return (sub == "meataxe" || sub == "certify") ? small.count(q) > 0 : all.count(q) > 0;
}

} // namespace detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Very-simplicity certificates for Q_B of U_3(q) on the Hermitian unital", "ucert"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", cfg.verbose, "Progress messages on stderr");

  auto* unital = app.add_subcommand("unital", "Enumerate the Hermitian unital");
  unital->add_option("--q", cfg.q, "Subfield size (4, 8, 16)")->required();
  unital->add_option("--emit", cfg.out, "Write JSON here instead of stdout");

  auto* group = app.add_subcommand("group", "SU_3(q) order, center, census and the image order on the unital");
  group->add_option("--q", cfg.q, "Subfield size (4, 8, 16)")->required();
  group->add_flag("--check-2transitive", cfg.check_2transitive, "Also report stabilizer orbits and index");

  auto* meataxe = app.add_subcommand("meataxe", "Absolute irreducibility certificate for Q_B or St_2");
  meataxe->add_option("--q", cfg.q, "Subfield size (4, 8)")->required();
  meataxe->add_option("--module", cfg.module, "qb or st2")->check(CLI::IsMember({"qb", "st2"}));
  meataxe->add_option("--seed", cfg.seed, "PRNG seed (default 0)");

  auto* traces = app.add_subcommand("traces", "Torus trace census and escape witnesses");
  traces->add_option("--q", cfg.q, "Subfield size (4, 8, 16)")->required();

  auto* certify = app.add_subcommand("certify", "Run the full pipeline and emit a certificate");
  certify->add_option("--q", cfg.q, "Subfield size (4, 8)")->required();
  certify->add_option("--seed", cfg.seed, "PRNG seed (default 0)");
  certify->add_option("--facts", cfg.facts, "Cited-facts JSON (default: shipped data file)");
  certify->add_option("--out", cfg.out, "Write the certificate here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kInputError;
  }

  for (auto* s : app.get_subcommands()) cfg.subcommand = s->get_name();
  if (!detail::supported(cfg.subcommand, cfg.q)) {
    err << "error: " << cfg.subcommand << " does not support q = " << cfg.q << "\n";
    return kInputError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  auto emit = [&](const json& j) -> bool {
    const std::string text = j.dump(2) + "\n";
    if (cfg.out.empty()) {
      out << text;
      return true;
    }
    if (!detail::write_file(cfg.out, text, err)) return false;
    detail::write_meta(cfg.out, cfg, elapsed(), err);
    return true;
  };

  try {
    if (cfg.subcommand == "unital") {
      return emit(unital_json(enumerate_unital(cfg.q))) ? kOk : kInputError;
    }
    if (cfg.subcommand == "group") {
      bool ok = false;
      const json j = group_json(cfg.q, cfg.check_2transitive, ok);
      out << j.dump(2) << "\n";
      return ok ? kOk : kRefuted;
    }
    if (cfg.subcommand == "traces") {
      out << traces_json(cfg.q).dump(2) << "\n";
      return kOk;
    }
    if (cfg.subcommand == "meataxe") {
      json j;
      AbsoluteVerdict v;
      if (cfg.module == "qb") {
        const Unital u = enumerate_unital(cfg.q);
        const PermGroup g(u.size(), action_on_unital(su3_generators(cfg.q), u));
        const QbModule qb = qb_module(u.size(), g.generators());
        const auto a = is_absolutely_irreducible(qb.module, cfg.seed);
        j = absolute_to_json(a, qb.module.dim());
        v = a.verdict;
      } else {
        const GfQModule st = st2_module(cfg.q);
        const auto a = is_absolutely_irreducible(st, cfg.seed);
        j = absolute_to_json(a, st.dim());
        v = a.verdict;
      }
      json full{{"q", cfg.q}, {"module", cfg.module}, {"field_order", cfg.module == "qb" ? 2 : cfg.q * cfg.q}};
      full.update(j);
      out << full.dump(2) << "\n";
      if (v == AbsoluteVerdict::absolutely_irreducible) return kOk;
      return v == AbsoluteVerdict::inconclusive ? kInconclusive : kRefuted;
    }
    // certify
    if (cfg.facts.empty()) cfg.facts = default_facts_path(cfg.q);
    const CitedFacts facts = load_facts(cfg.facts);
    if (cfg.verbose) err << "certify: q = " << cfg.q << ", seed = " << cfg.seed << ", facts = " << cfg.facts << "\n";
    const Certificate cert = certify_very_simple(cfg.q, cfg.seed, facts);
    if (cfg.verbose) err << "certify: " << cert.verdict << " in " << elapsed() << " s\n";
    if (!emit(cert.body)) return kInputError;
    return cert.exit_code();
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

} // namespace ucert::cli

#endif // UCERT_CLI_HPP
