#ifndef UCERT_CERTIFY_HPP
#define UCERT_CERTIFY_HPP

// The very-simplicity pipeline for Q_B of U_3(q) on the Hermitian unital:
// cited-facts ingestion, the individual hypothesis checks, and certificate
// assembly as deterministic JSON.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ucert/meataxe.hpp"

namespace ucert {

using json = nlohmann::ordered_json;

/// Malformed or unreadable input (exit code 3 at the CLI).
class input_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Status { computed, cited, refuted, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
  case Status::computed: return "computed";
  case Status::cited: return "cited";
  case Status::refuted: return "refuted";
  case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CheckRecord {
  CheckRecord() = default;
  explicit CheckRecord(std::string n) : name(std::move(n)) {}

  std::string name;
  Status status = Status::inconclusive;
  json data = json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> cites; // cited inputs a computed check relies on

  bool passed() const { return status == Status::computed || status == Status::cited; }

  json to_json() const {
    json j;
    j["name"] = name;
    j["status"] = to_string(status);
    if (seed) j["seed"] = *seed;
    if (!cites.empty()) j["cites"] = cites;
    j["data"] = data;
    return j;
  }
};

// ---------------------------------------------------------------------------
// Cited facts

struct CitedFacts {
  std::uint64_t version = 1;
  std::uint64_t q = 0;
  std::uint64_t min_subgroup_index = 0;
  std::string min_subgroup_index_source;
  std::optional<std::vector<std::uint64_t>> brauer_f2_dimensions;
  std::string brauer_source;
  std::string dichotomy_source;
  std::string bridge_source;
};

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw input_error(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::uint64_t require_uint(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw input_error(where + ": field '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::string require_string(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw input_error(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

} // namespace detail

/// Schema validation only. The cited values themselves are judged by the
/// hypothesis checks, so a well-formed file with wrong values produces a
/// refutation rather than an input error.
inline CitedFacts parse_facts(const json& j) {
  using namespace detail;
  const std::string w = "facts";
  if (!j.is_object()) throw input_error("facts: top level must be an object");
  CitedFacts f;
  if (j.contains("version")) f.version = require_uint(j, "version", w);
  f.q = require_uint(j, "q", w);
  const json& idx = require(j, "min_subgroup_index", w);
  f.min_subgroup_index = require_uint(idx, "value", w + ".min_subgroup_index");
  f.min_subgroup_index_source = require_string(idx, "source", w + ".min_subgroup_index");
  if (j.contains("brauer_f2_dimensions")) {
    const json& b = j.at("brauer_f2_dimensions");
    const json& vals = require(b, "values", w + ".brauer_f2_dimensions");
    if (!vals.is_array()) throw input_error("facts.brauer_f2_dimensions.values must be an array");
    std::vector<std::uint64_t> dims;
    for (const auto& v : vals) {
      if (!v.is_number_unsigned()) throw input_error("facts.brauer_f2_dimensions.values must hold positive integers");
      dims.push_back(v.get<std::uint64_t>());
    }
    f.brauer_f2_dimensions = std::move(dims);
    f.brauer_source = require_string(b, "source", w + ".brauer_f2_dimensions");
  }
  f.dichotomy_source = require_string(require(j, "dichotomy", w), "source", w + ".dichotomy");
  if (j.contains("bridge")) f.bridge_source = require_string(j.at("bridge"), "source", w + ".bridge");
  return f;
}

inline CitedFacts load_facts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open facts file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("facts file is not valid JSON: ") + e.what());
  }
  return parse_facts(j);
}

inline std::string default_facts_path(std::uint64_t q) {
#ifdef UCERT_DATA_DIR
  return std::string(UCERT_DATA_DIR) + "/facts_q" + std::to_string(q) + ".json";
#else
  return "data/facts_q" + std::to_string(q) + ".json";
#endif
}

// ---------------------------------------------------------------------------
// Individual checks

inline unsigned v2(const big_int& x) {
  if (x == 0) throw domain_error("v2 of zero");
  unsigned k = 0;
  big_int y = x;
  while ((y & 1) == 0) {
    y >>= 1;
    ++k;
  }
  return k;
}

inline bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

/// Pass iff n-1 is a power of 2 equal to the 2-part of the group order.
inline CheckRecord check_brauer_nesbitt(const big_int& group_order, std::uint64_t n) {
  if (n % 2 == 0) throw domain_error("check_brauer_nesbitt requires odd n");
  CheckRecord r{"check_brauer_nesbitt"};
  const unsigned v = v2(group_order);
  const bool pow2 = is_power_of_two(n - 1);
  const unsigned lg = pow2 ? static_cast<unsigned>(std::countr_zero(n - 1)) : 0;
  const big_int odd = group_order >> v;
  r.data["group_order"] = group_order.str();
  r.data["factorization"] = {{"two_power", v}, {"odd_part", odd.str()}};
  r.data["v2_group_order"] = v;
  r.data["n_minus_1"] = n - 1;
  r.data["n_minus_1_is_power_of_two"] = pow2;
  if (pow2) r.data["log2_n_minus_1"] = lg;
  const bool pass = pow2 && lg == v;
  r.data["pass"] = pass;
  r.status = pass ? Status::computed : Status::refuted;
  return r;
}

/// Every proper subgroup has index > N. `stabilizer_index` is the computed
/// index of a point stabilizer, which bounds the true minimum from above.
inline CheckRecord check_very3_hyp1(const CitedFacts& facts, std::uint64_t N, std::uint64_t stabilizer_index) {
  CheckRecord r{"check_very3_hyp1"};
  r.data["N"] = N;
  r.data["min_subgroup_index"] = facts.min_subgroup_index;
  r.data["source"] = facts.min_subgroup_index_source;
  r.data["computed_stabilizer_index"] = stabilizer_index;
  if (facts.min_subgroup_index <= N) {
    r.status = Status::refuted;
    r.data["reason"] = "cited minimum index does not exceed N";
  } else if (facts.min_subgroup_index > stabilizer_index) {
    r.status = Status::refuted;
    r.data["reason"] = "cited minimum index exceeds the index of a computed point stabilizer";
  } else {
    r.status = Status::cited;
    r.data["reason"] = "every index dividing N is at most N, below the cited minimum";
  }
  return r;
}

/// No factorization N = a*b (a, b > 1) admits absolutely simple F_2-modules
/// of both dimensions. N = q^3, so a and b are powers of 2 below q^3.
inline CheckRecord check_very3_hyp2(std::uint64_t q, const TraceCensus& census, const CitedFacts& facts) {
  if (q != 4 && q != 8) throw domain_error("check_very3_hyp2 supports q in {4, 8}");
  CheckRecord r{"check_very3_hyp2"};
  const std::uint64_t N = q * q * q;
  r.data["N"] = N;
  r.data["census"] = {{"r", census.r}, {"threshold_holds", census.threshold_holds}, {"values", census.values}};

  if (census.threshold_holds) {
    // Trace route: no twisted tensor product rho_S with proper nonempty S
    // is realizable over F_2, and every other absolutely simple module has
    // dimension divisible by 3 or is rho_S for the full S (dimension q^3).
    json witnesses = json::array();
    bool all = true;
    for (std::uint64_t M = 1; M <= q - 2; ++M) {
      const EscapeResult e = escape_witness(M, q);
      json w{{"M", M}};
      if (e.witness) {
        w["t"] = *e.witness;
        w["t_pow_M"] = e.power;
      } else {
        w["t"] = nullptr;
        all = false;
      }
      witnesses.push_back(std::move(w));
    }
    r.data["route"] = "trace";
    r.data["escape_witnesses"] = std::move(witnesses);
    r.data["dichotomy_source"] = facts.dichotomy_source;
    r.data["arithmetic"] =
        "a proper factor of q^3 is a power of 2 prime to 3, so by the dichotomy an absolutely simple module "
        "of that dimension is some rho_S with S proper and nonempty; its trace escapes F_2, so it is not "
        "defined over F_2";
    r.cites.push_back("dichotomy");
    if (!all) {
      r.status = Status::refuted;
      r.data["reason"] = "some exponent M has no escape witness";
    } else if (facts.dichotomy_source.empty()) {
      r.status = Status::inconclusive;
      r.data["reason"] = "dichotomy citation missing";
    } else {
      r.status = Status::computed;
    }
    return r;
  }

  // Table route.
  r.data["route"] = "brauer-table";
  const EscapeResult e1 = escape_witness(1, q);
  r.data["trace_route_escape_M1"] = e1.witness ? json(*e1.witness) : json(nullptr);
  if (!facts.brauer_f2_dimensions) {
    r.status = Status::inconclusive;
    r.data["reason"] = "no Brauer dimension data and the trace route is unavailable at this q";
    return r;
  }
  std::vector<std::uint64_t> nontrivial_pow2;
  for (auto d : *facts.brauer_f2_dimensions)
    if (d > 1 && is_power_of_two(d)) nontrivial_pow2.push_back(d);
  r.data["brauer_f2_dimensions"] = *facts.brauer_f2_dimensions;
  r.data["source"] = facts.brauer_source;
  r.data["nontrivial_power_of_two_dimensions"] = nontrivial_pow2;
  if (nontrivial_pow2 == std::vector<std::uint64_t>{N}) {
    r.status = Status::cited;
    r.data["reason"] = "the only nontrivial 2-power dimension is N itself, so no proper factor is realized";
  } else {
    r.status = Status::refuted;
    r.data["reason"] = "cited dimensions contain a nontrivial 2-power other than N";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialization helpers

inline json vec_to_json(const Vec<Gf2>& v) {
  json s = json::array();
  v.for_each_nonzero([&](std::size_t i, elem_t) { s.push_back(i); });
  return json{{"dim", v.size()}, {"support", s}};
}

inline json vec_to_json(const Vec<GfQ>& v) { return json{{"dim", v.size()}, {"entries", v.values()}}; }

inline json algebra_element_to_json(const AlgebraElement& a) {
  json terms = json::array();
  for (const auto& t : a.terms) terms.push_back({{"coeff", t.coeff}, {"word", t.word}});
  return terms;
}

template <class K> json certificate_to_json(const IrreducibilityCertificate<K>& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["seed"] = c.seed;
  j["attempts"] = c.attempts;
  if (c.norton) {
    const auto& w = *c.norton;
    j["witness"] = {{"kind", "norton"},
                    {"theta", algebra_element_to_json(w.theta)},
                    {"factor", w.factor},
                    {"nullity", w.nullity},
                    {"null_vector", vec_to_json(w.null_vector)},
                    {"spin_dim", w.spin_dim},
                    {"dual_vector", vec_to_json(w.dual_vector)},
                    {"dual_spin_dim", w.dual_spin_dim}};
  }
  if (c.reducible) {
    const auto& w = *c.reducible;
    j["witness"] = {{"kind", "submodule"},
                    {"vector", vec_to_json(w.vector)},
                    {"in_dual", w.dual},
                    {"spin_dim", w.spin_dim},
                    {"submodule_dim", w.submodule_dim}};
  }
  return j;
}

template <class K> json absolute_to_json(const AbsoluteIrreducibility<K>& a, std::size_t dim) {
  json j;
  j["dim"] = dim;
  j["verdict"] = to_string(a.verdict);
  j["endomorphism_degree"] = a.endomorphism_degree;
  j["nullity"] = a.nullity;
  j["commutant_dim"] = a.commutant_dim ? json(*a.commutant_dim) : json(nullptr);
  j["certificate"] = certificate_to_json(a.irreducibility);
  return j;
}

// ---------------------------------------------------------------------------
// The pipeline

inline const std::vector<std::string>& check_order() {
  static const std::vector<std::string> names{"unital_count",
                                              "group_order",
                                              "transitivity",
                                              "double_transitivity",
                                              "stabilizer_index",
                                              "qb_dimension",
                                              "check_brauer_nesbitt",
                                              "meataxe_absolute_irreducibility",
                                              "check_very3_hyp1",
                                              "check_very3_hyp2"};
  return names;
}

struct Certificate {
  std::uint64_t q = 0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  std::string verdict; // very-simple-certified | refuted | inconclusive
  std::optional<std::string> failed_check;
  json body;

  int exit_code() const {
    if (verdict == "very-simple-certified") return 0;
    if (verdict == "refuted") return 1;
    return 2;
  }
  std::string dump() const { return body.dump(2) + "\n"; }
};

namespace detail {

inline json remark_notes() {
  return json{
      {"i", "very simplicity passes from a subgroup to any overgroup acting on the same module, so a Galois group "
            "between U_3(q) and PGU_3(q) inherits it"},
      {"ii", "a very simple module is absolutely simple; certified here by the MeatAxe check"},
      {"iii", "one-dimensional modules are very simple; not applicable since dim Q_B = q^3 > 1"},
      {"iv", "a very simple module of dimension > 1 is neither induced nor a tensor product of smaller modules"},
      {"v", "over F_2 for a perfect group, (ii)-(iv) characterize very simplicity; the hypothesis checks instantiate "
            "this characterization"}};
}

inline json degree_readings(std::uint64_t q) {
  const unsigned m = static_cast<unsigned>(std::countr_zero(q));
  return json{{"implemented", "n = 2^(3m) + 1 = q^3 + 1"},
              {"implemented_value", (std::uint64_t(1) << (3 * m)) + 1},
              {"alternative", "n = 2^(3m+1) + 1"},
              {"alternative_value", (std::uint64_t(1) << (3 * m + 1)) + 1},
              {"note", "the degree hypothesis on f is also stated as 2^(3m+1)+1 while the unital has q^3+1 "
                       "points; the unital reading is the one certified"}};
}

inline json consequence(const CitedFacts& facts, bool certified) {
  return json{{"status", "cited"},
              {"bridge", "the Gal(f)-modules J(C)_2 and Q_R are isomorphic"},
              {"bridge_source", facts.bridge_source},
              {"statement", "if Q_R is very simple then either End(J(C_f)) = Z, or char(K) > 0 and J(C_f) is a "
                            "supersingular abelian variety"},
              {"applies", certified}};
}

} // namespace detail

/// Runs the ten checks in order, stopping at the first refutation.
/// `generators` replaces the standard SU_3(q) generating set when given.
inline Certificate certify_very_simple(std::uint64_t q, std::uint64_t seed, const CitedFacts& facts,
                                       const std::optional<GeneratorSet>& generators = std::nullopt) {
  if (q != 4 && q != 8) throw domain_error("certify supports q in {4, 8}");
  if (facts.q != q) throw input_error("facts file is for q = " + std::to_string(facts.q));

  Certificate cert;
  cert.q = q;
  cert.seed = seed;
  const std::uint64_t N = q * q * q;
  const std::uint64_t n_expected = N + 1;
  bool inconclusive = false;

  auto push = [&](CheckRecord r) {
    if (r.status == Status::inconclusive) inconclusive = true;
    const bool refuted = r.status == Status::refuted;
    cert.checks.push_back(std::move(r));
    if (refuted) cert.failed_check = cert.checks.back().name;
    return !refuted;
  };

  auto finish = [&]() {
    json j;
    j["q"] = q;
    j["m"] = static_cast<unsigned>(std::countr_zero(q));
    j["n"] = n_expected;
    j["seed"] = seed;
    j["facts_version"] = facts.version;
    json checks = json::array();
    for (const auto& c : cert.checks) checks.push_back(c.to_json());
    j["checks"] = std::move(checks);
    if (cert.failed_check) {
      cert.verdict = "refuted";
      j["failed_check"] = *cert.failed_check;
    } else if (inconclusive || cert.checks.size() != check_order().size()) {
      cert.verdict = "inconclusive";
    } else {
      cert.verdict = "very-simple-certified";
    }
    const bool ok = cert.verdict == "very-simple-certified";
    j["verdict"] = cert.verdict;
    j["verdict_text"] =
        ok ? "Q_B of U_3(" + std::to_string(q) + ") on the " + std::to_string(n_expected) +
                 "-point Hermitian unital is very simple; for f of degree " + std::to_string(n_expected) +
                 " with Gal(f) containing U_3(" + std::to_string(q) +
                 "), either End(J(C_f)) = Z, or char(K) > 0 and J(C_f) is a supersingular abelian variety"
           : cert.verdict == "refuted"
               ? "refuted at " + *cert.failed_check + "; no conclusion about End(J(C_f)) is drawn"
               : "inconclusive; no conclusion about End(J(C_f)) is drawn";
    j["consequence"] = detail::consequence(facts, ok);
    j["degree_readings"] = detail::degree_readings(q);
    j["notes"] = detail::remark_notes();
    cert.body = std::move(j);
    return cert;
  };

  // 1. unital
  const Unital unital = enumerate_unital(q);
  {
    CheckRecord r{"unital_count"};
    r.data = {{"n", unital.size()}, {"expected", n_expected}, {"lines_scanned", unital.lines_scanned()}};
    r.status = unital.size() == n_expected ? Status::computed : Status::refuted;
    if (!push(std::move(r))) return finish();
  }

  // 2. group order
  const GeneratorSet gs = generators ? *generators : su3_generators(q);
  const std::vector<Perm> perms = action_on_unital(gs, unital);
  const PermGroup group(unital.size(), perms);
  {
    const std::uint64_t z = center_order(q);
    const std::uint64_t expected = su3_order_formula(q) / z;
    CheckRecord r{"group_order"};
    r.data = {{"generators", gs.generators.size()},
              {"su3_order", su3_order_formula(q)},
              {"center_order", z},
              {"expected", expected},
              {"order", group.order().str()},
              {"base", group.base()},
              {"fundamental_orbit_lengths", group.fundamental_orbit_lengths()}};
    r.status = group.order() == expected ? Status::computed : Status::refuted;
    if (!push(std::move(r))) return finish();
  }

  // 3. transitivity
  {
    CheckRecord r{"transitivity"};
    const auto orb = orbit(group.degree(), group.generators(), 0);
    r.data = {{"orbit_of_0", orb.size()}, {"n", group.degree()}};
    r.status = orb.size() == group.degree() ? Status::computed : Status::refuted;
    if (!push(std::move(r))) return finish();
  }

  // 4. double transitivity at three sample points
  {
    CheckRecord r{"double_transitivity"};
    const std::size_t n = group.degree();
    const std::vector<std::size_t> expected{1, n - 1};
    bool ok = true;
    json samples = json::array();
    for (point_t b : {point_t(0), point_t(n / 2), point_t(n - 1)}) {
      const auto sizes = stabilizer_orbit_sizes(group, b);
      ok = ok && sizes == expected;
      samples.push_back({{"point", b}, {"orbit_sizes", sizes}});
    }
    r.data = {{"expected", expected}, {"samples", samples}};
    r.status = ok ? Status::computed : Status::refuted;
    if (!push(std::move(r))) return finish();
  }

  // 5. stabilizer index
  std::uint64_t stab_index = 0;
  {
    CheckRecord r{"stabilizer_index"};
    const big_int idx = stabilizer_index(group, 0);
    stab_index = static_cast<std::uint64_t>(idx);
    r.data = {{"point", 0}, {"index", idx.str()}, {"expected", n_expected}};
    r.status = idx == n_expected ? Status::computed : Status::refuted;
    if (!push(std::move(r))) return finish();
  }

  // 6. Q_B
  const QbModule qb = qb_module(group.degree(), group.generators());
  {
    CheckRecord r{"qb_dimension"};
    r.data = {{"dim", qb.module.dim()},
              {"expected", N},
              {"generators", qb.module.generator_count()},
              {"complement_splits", qb.complement_splits}};
    r.status = qb.module.dim() == N && qb.complement_splits ? Status::computed : Status::refuted;
    if (!push(std::move(r))) return finish();
  }

  // 7. Brauer-Nesbitt
  if (!push(check_brauer_nesbitt(group.order(), group.degree()))) return finish();

  // 8. MeatAxe
  {
    CheckRecord r{"meataxe_absolute_irreducibility"};
    r.seed = seed;
    const auto a = is_absolutely_irreducible(qb.module, seed);
    r.data = absolute_to_json(a, qb.module.dim());
    const bool reverified = reverify(qb.module, a.irreducibility);
    r.data["reverified"] = reverified;
    switch (a.verdict) {
    case AbsoluteVerdict::absolutely_irreducible: r.status = reverified ? Status::computed : Status::refuted; break;
    case AbsoluteVerdict::inconclusive: r.status = Status::inconclusive; break;
    default: r.status = Status::refuted; break;
    }
    if (!push(std::move(r))) return finish();
  }

  // 9, 10. hypotheses
  if (!push(check_very3_hyp1(facts, N, stab_index))) return finish();
  if (!push(check_very3_hyp2(q, trace_census(q), facts))) return finish();
  return finish();
}

} // namespace ucert

#endif // UCERT_CERTIFY_HPP
