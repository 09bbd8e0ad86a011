// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "ucert/cli.hpp"

using namespace ucert;
namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

struct Criterion {
  bool ok = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct CliRun {
  int code;
  std::string out;
};

CliRun cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "ucert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::dispatch(int(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::string fmt(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s << " s";
  return o.str();
}

oracle::Mat2 to_mask(const Matrix<Gf2>& m) {
  oracle::Mat2 r(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    m.row(i).for_each_nonzero([&](std::size_t j, elem_t) { r[i] |= 1u << j; });
  return r;
}

std::vector<oracle::Mat2> to_masks(const Gf2Module& m) {
  std::vector<oracle::Mat2> out;
  for (const auto& a : m.actions()) out.push_back(to_mask(a));
  return out;
}

const PermGroup& psu3(std::uint64_t q) {
  static std::map<std::uint64_t, std::unique_ptr<PermGroup>> cache;
  auto& slot = cache[q];
  if (!slot) {
    const Unital u = enumerate_unital(q);
    slot = std::make_unique<PermGroup>(u.size(), action_on_unital(su3_generators(q), u));
  }
  return *slot;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

// 1
Criterion unital_counts() {
  Criterion c;
  for (std::uint64_t q : {4ull, 8ull, 16ull}) {
    const auto t0 = clock_type::now();
    const CliRun r = cli_run({"unital", "--q", std::to_string(q)});
    const double s = since(t0);
    const std::uint64_t want = q * q * q + 1;
    c.require(r.code == 0 && json::parse(r.out)["n"] == want, "n(" + std::to_string(q) + ") = " + std::to_string(want));
    c.require(s < 1.0, "unital q=" + std::to_string(q) + " under 1 s");
    c.note("q=" + std::to_string(q) + " n=" + std::to_string(want) + " " + fmt(s));
  }
  return c;
}

// 2
Criterion group_orders() {
  Criterion c;
  const std::pair<std::uint64_t, double> cases[]{{4, 5.0}, {8, 60.0}};
  const std::uint64_t want[]{62400, 5515776};
  for (int i = 0; i < 2; ++i) {
    const auto [q, limit] = cases[i];
    const auto t0 = clock_type::now();
    const PermGroup& g = psu3(q);
    const double s = since(t0);
    c.require(g.order() == want[i], "PSU3(" + std::to_string(q) + ") order " + std::to_string(want[i]));
    c.require(s < limit, "q=" + std::to_string(q) + " within " + fmt(limit));
    c.note("q=" + std::to_string(q) + " |G|=" + g.order().str() + " " + fmt(s));
  }
  c.require(su3_generators(8).claimed_order == 16547328, "SU3(8) claimed order 16547328");
  c.require(su3_order_formula(8) == 16547328, "SU3(8) order formula");
  c.require(center_order(8) == 3 && center_elements(8).size() == 3, "center of SU3(8) has order 3");
  return c;
}

// 3
Criterion double_transitivity() {
  Criterion c;
  for (std::uint64_t q : {4ull, 8ull}) {
    const PermGroup& g = psu3(q);
    const std::size_t n = q * q * q + 1;
    c.require(is_transitive(g), "transitive q=" + std::to_string(q));
    const auto sizes = stabilizer_orbit_sizes(g, 0);
    c.require(sizes == std::vector<std::size_t>{1, n - 1}, "orbit sizes {1, q^3} q=" + std::to_string(q));
    c.require(stabilizer_index(g, 0) == n, "stabilizer index q^3+1 q=" + std::to_string(q));
    c.note("q=" + std::to_string(q) + " orbits {1," + std::to_string(sizes.back()) + "}");
  }
  return c;
}

// 4
Criterion meataxe() {
  Criterion c;
  for (const auto& [q, limit] : std::vector<std::pair<std::uint64_t, double>>{{4, 10.0}, {8, 300.0}}) {
    const auto t0 = clock_type::now();
    const QbModule qb = qb_module(psu3(q).degree(), psu3(q).generators());
    c.require(qb.module.dim() == q * q * q, "Q_B dim q^3");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto a = is_absolutely_irreducible(qb.module, seed);
      c.require(a.verdict == AbsoluteVerdict::absolutely_irreducible && reverify(qb.module, a.irreducibility),
                "Q_B q=" + std::to_string(q) + " seed " + std::to_string(seed));
      if (qb.module.dim() <= kCommutantCrossCheckLimit)
        c.require(a.commutant_dim == std::optional<std::size_t>(1), "commutant of Q_B q=4 is scalars");
    }
    const double s = since(t0);
    c.require(s < limit, "Q_B q=" + std::to_string(q) + " within " + fmt(limit));
    c.note("Q_B q=" + std::to_string(q) + " dim " + std::to_string(qb.module.dim()) + " x5 seeds " + fmt(s));
  }
  for (std::uint64_t q : {4ull, 8ull}) {
    const auto t0 = clock_type::now();
    const auto st = st2_module(q);
    const auto a = is_absolutely_irreducible(st, 0);
    const double s = since(t0);
    c.require(a.verdict == AbsoluteVerdict::absolutely_irreducible && a.commutant_dim == std::optional<std::size_t>(1),
              "St2 q=" + std::to_string(q));
    c.require(s < 1.0, "St2 q=" + std::to_string(q) + " under 1 s");
    c.note("St2 q=" + std::to_string(q) + " " + fmt(s));
  }

  // negative controls
  const Perm c7 = Perm::cycle(7, {0, 1, 2, 3, 4, 5, 6});
  const auto reg = qb_module(7, {c7}).module;
  const auto rc = is_irreducible(reg, 0);
  c.require(rc.verdict == Verdict::reducible && rc.reducible && rc.reducible->submodule_dim == 3,
            "C7 regular Q_B reducible with a 3-dim witness");

  Matrix<Gf2> x(Gf2{}, 2, 2);
  x.set(0, 1, 1);
  x.set(1, 0, 1);
  x.set(1, 1, 1);
  const Gf2Module c3(Gf2{}, 2, {x});
  const auto a3 = is_absolutely_irreducible(c3, 0);
  c.require(a3.verdict == AbsoluteVerdict::not_absolutely_irreducible && a3.endomorphism_degree == 2,
            "order-3 module irreducible with endomorphism degree 2");
  c.require(is_irreducible(direct_sum(c3, c3), 0).verdict == Verdict::reducible, "M + M reducible");
  c.require(is_irreducible(direct_sum(st2_module(4), st2_module(4)), 0).verdict == Verdict::reducible,
            "St2 + St2 reducible");

  // oracle agreement
  const Perm s5a = Perm::cycle(5, {0, 1, 2, 3, 4}), s5b = Perm::cycle(5, {0, 1});
  const Perm frob = Perm(std::vector<point_t>{0, 2, 4, 6, 1, 3, 5});
  const std::vector<Gf2Module> small{c3,
                                     reg,
                                     direct_sum(c3, c3),
                                     qb_module(5, {s5a, s5b}).module,
                                     perm_module(5, {s5a, s5b}),
                                     perm_module(7, {c7, frob}),
                                     qb_module(7, {c7, frob}).module,
                                     qb_module(8, {Perm::cycle(8, {0, 1, 2, 3, 4, 5, 6, 7}), Perm::cycle(8, {0, 1})}).module};
  std::size_t compared = 0;
  for (const auto& m : small) {
    const int d = int(m.dim());
    const bool want = oracle::exhaustive_irreducible(to_masks(m), d);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto a = is_absolutely_irreducible(m, seed);
      c.require((a.verdict != AbsoluteVerdict::reducible) == want, "exhaustive-spin oracle agreement");
      if (d * d <= 16 && a.verdict != AbsoluteVerdict::reducible)
        c.require(std::size_t(1) << a.endomorphism_degree == oracle::commutant_count(to_masks(m), d),
                  "commutant count oracle");
      ++compared;
    }
    c.require(!want || commutant_dimension(m) == *is_absolutely_irreducible(m, 0).commutant_dim,
              "exact commutant solve agreement");
  }
  c.note(std::to_string(compared) + " oracle comparisons");
  return c;
}

// 5
Criterion traces() {
  Criterion c;
  const auto c4 = trace_census(4), c8 = trace_census(8), c16 = trace_census(16);
  c.require(c4.r == 1 && !c4.threshold_holds, "r=1 at q=4, threshold fails");
  c.require(c8.r == 3 && c8.threshold_holds, "r=3 at q=8");
  c.require(c16.r == 7 && c16.threshold_holds, "r=7 at q=16");
  for (std::uint64_t M = 1; M <= 6; ++M) c.require(escape_witness(M, 8).witness.has_value(), "escape witness q=8");
  c.require(!escape_witness(1, 4).witness.has_value(), "no escape witness for M=1 at q=4");

  const GeneratorSet gs = su3_generators(8);
  const Tower& t = Tower::get(8);
  Rng rng(2024);
  for (int i = 0; i < 10; ++i) {
    Mat3 u = Mat3::identity(t);
    for (int k = 0; k < 6; ++k) u = u * gs.generators[rng.below(gs.generators.size())];
    const auto a = adjoint_matrix(u);
    const FieldElem t0 = t.ext_elem(a.trace());
    for (unsigned j = 1; j < 6; ++j) {
      const auto kron = linalg::kronecker(a, frobenius_twist(a, j));
      c.require(t.ext_elem(kron.trace()) == tensor_trace(t0, {0, j}), "Kronecker trace cross-check");
    }
  }
  c.note("r = 1, 3, 7");
  return c;
}

// 6
Criterion brauer_nesbitt() {
  Criterion c;
  c.require(oracle::v2(62400) == 6 && oracle::v2(5515776) == 9, "v2 oracle");
  c.require(check_brauer_nesbitt(psu3(4).order(), 65).status == Status::computed, "BN at q=4");
  c.require(check_brauer_nesbitt(psu3(8).order(), 513).status == Status::computed, "BN at q=8");
  const PermGroup s5(5, {Perm::cycle(5, {0, 1, 2, 3, 4}), Perm::cycle(5, {0, 1})});
  c.require(check_brauer_nesbitt(s5.order(), 5).status == Status::refuted, "S5 fails BN");
  const auto qb = qb_module(5, s5.generators()).module;
  c.require(is_irreducible(qb, 0).verdict == Verdict::irreducible, "S5 Q_B irreducible by MeatAxe");
  c.require(oracle::exhaustive_irreducible(to_masks(qb), 4), "S5 Q_B irreducible by 15-vector oracle");
  return c;
}

// 7
Criterion end_to_end() {
  Criterion c;
  const fs::path dir = fs::temp_directory_path() / "ucert_acceptance";
  fs::create_directories(dir);
  for (std::uint64_t q : {4ull, 8ull}) {
    const std::string qs = std::to_string(q);
    const fs::path a = dir / ("a" + qs + ".json"), b = dir / ("b" + qs + ".json");
    const auto t0 = clock_type::now();
    const int ca = cli_run({"certify", "--q", qs, "--seed", "0", "--out", a.string()}).code;
    const int cb = cli_run({"certify", "--q", qs, "--seed", "0", "--out", b.string()}).code;
    const double s = since(t0);
    c.require(ca == 0 && cb == 0, "certify q=" + qs + " exits 0");
    c.require(json::parse(slurp(a))["verdict"] == "very-simple-certified", "verdict q=" + qs);
    c.require(slurp(a) == slurp(b), "byte-identical q=" + qs);
    c.note("q=" + qs + " 2 runs " + fmt(s));
  }
  json f = json::parse(slurp(default_facts_path(4)));
  f["min_subgroup_index"]["value"] = 64;
  const fs::path tampered = dir / "tampered.json";
  std::ofstream(tampered) << f.dump(2);
  const CliRun r = cli_run({"certify", "--q", "4", "--seed", "0", "--facts", tampered.string()});
  c.require(r.code == 1, "tampered facts exit 1");
  c.require(json::parse(r.out)["failed_check"] == "check_very3_hyp1", "refutation names check_very3_hyp1");
  return c;
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria{
      {"unital counts", unital_counts},
      {"group orders", group_orders},
      {"double transitivity", double_transitivity},
      {"meataxe", meataxe},
      {"trace machinery", traces},
      {"brauer-nesbitt", brauer_nesbitt},
      {"end-to-end certify", end_to_end},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes.push_back(std::string("exception: ") + e.what());
    }
    all = all && c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first << ")";
    for (const auto& n : c.notes) std::cout << "; " << n;
    std::cout << std::endl;
  }
  return all ? 0 : 1;
}
