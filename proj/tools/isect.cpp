#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isect/codes.hpp"
#include "isect/ekr.hpp"
#include "isect/error.hpp"
#include "isect/gf.hpp"
#include "isect/io.hpp"
#include "isect/schemes.hpp"
#include "isect/search.hpp"
#include "isect/spectral.hpp"

namespace {

using isect::BigInt;
using isect::Errc;
using isect::Error;
using isect::Rational;
using isect::io::json;
namespace io = isect::io;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "isect 1.0.0";

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kCapExceeded = 3 };

int exit_code_for(Errc e) {
  switch (e) {
    case Errc::TooLarge:
    case Errc::OrderTooLarge:
    case Errc::Timeout:
      return kCapExceeded;
    case Errc::VerificationFailed:
    case Errc::TableMismatch:
    case Errc::FormulaMismatch:
    case Errc::NotAScheme:
    case Errc::NotConstant:
      return kVerifyFailed;
    default:
      return kUsage;
  }
}

/// Verification failures that are findings about a claimed artifact.
struct Rejected {
  std::string message;
};

class ResultCache {
 public:
  explicit ResultCache(std::string dir) : dir_(std::move(dir)) {}

  bool enabled() const { return !dir_.empty(); }

  std::optional<json> get(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path(key));
    if (!in) return std::nullopt;
    try {
      json j = json::parse(in);
      if (j.value("tool_version", "") != kToolVersion || j.value("key", "") != key) return std::nullopt;
      return j.at("result");
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void put(const std::string& key, const json& result) const {
    if (!enabled()) return;
    fs::create_directories(dir_);
    json j;
    j["tool_version"] = kToolVersion;
    j["key"] = key;
    j["result"] = result;
    std::ofstream(path(key)) << j.dump(2) << "\n";
  }

  static std::string hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

 private:
  std::string path(const std::string& key) const { return (fs::path(dir_) / (hash(key) + ".json")).string(); }
  std::string dir_;
};

template <class Fn>
json cached(const ResultCache& cache, const std::string& key, Fn&& compute) {
  if (auto hit = cache.get(key)) return *hit;
  json r = compute();
  cache.put(key, r);
  return r;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::BadInput, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::BadInput, "cannot write " + path);
  out << j.dump(2) << "\n";
}

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok[0] == 'R' || tok[0] == 'r') tok = tok.substr(1);
    try {
      std::size_t used = 0;
      const auto v = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(Errc::BadParameters, "bad list entry '" + tok + "'");
    }
  }
  return out;
}

std::string render(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_table(const json& j, const std::string& indent = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_object()) {
      std::cout << indent << it.key() << ":\n";
      print_table(it.value(), indent + "  ");
    } else if (it.value().is_array() && !it.value().empty() && it.value().front().is_array()) {
      std::cout << indent << it.key() << ":\n";
      for (const auto& row : it.value()) std::cout << indent << "  " << row.dump() << "\n";
    } else {
      std::cout << indent << it.key() << ": " << render(it.value()) << "\n";
    }
  }
}

struct Globals {
  std::string format = "json";
  unsigned threads = 0;
  std::string cache_dir;
  std::uint64_t enumeration_cap = isect::default_config().enumeration_cap;
  std::uint64_t search_cap = isect::default_config().search_cap;
  std::uint64_t census_cap = isect::default_config().census_cap;
  std::uint64_t verify_cap = isect::default_config().verify_cap;

  isect::Config config() const {
    isect::Config c;
    c.enumeration_cap = enumeration_cap;
    c.search_cap = search_cap;
    c.census_cap = census_cap;
    c.verify_cap = verify_cap;
    c.threads = threads;
    return c;
  }
};

void emit(const Globals& g, json j) {
  if (!j.contains("schema_version")) {
    json out;
    out["schema_version"] = io::kSchemaVersion;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
    j = std::move(out);
  }
  if (g.format == "json")
    std::cout << j.dump() << "\n";
  else
    print_table(j);
}

std::string code_key(const isect::LinearCode& C) { return ResultCache::hash(io::code_to_json(C).dump()); }

json t_list(const std::vector<std::size_t>& T) {
  json a = json::array();
  for (auto t : T) a.push_back(t);
  return a;
}

// ---------------------------------------------------------------------------

json cmd_field(std::uint32_t p, std::uint32_t h, bool tables, const isect::Config& cfg) {
  const auto F = isect::Field::create(p, h);
  json j;
  j["p"] = F->p();
  j["h"] = F->h();
  j["q"] = F->q();
  j["modulus"] = io::vec(F->modulus());
  j["primitive"] = F->primitive().code;
  if (tables) {
    if (static_cast<std::uint64_t>(F->q()) * F->q() > cfg.enumeration_cap) throw Error(Errc::TooLarge, "tables exceed the enumeration cap");
    json add = json::array(), mul = json::array();
    for (std::uint32_t a = 0; a < F->q(); ++a) {
      json ra = json::array(), rm = json::array();
      for (std::uint32_t b = 0; b < F->q(); ++b) {
        ra.push_back(F->add(isect::Elem{a}, isect::Elem{b}).code);
        rm.push_back(F->mul(isect::Elem{a}, isect::Elem{b}).code);
      }
      add.push_back(ra);
      mul.push_back(rm);
    }
    j["add"] = add;
    j["mul"] = mul;
  }
  return j;
}

json code_report(const isect::LinearCode& C, bool wdist, bool extend, const isect::Config& cfg) {
  json j = io::code_to_json(C);
  j.erase("schema_version");
  j["mds"] = isect::is_mds(C, cfg);
  j["minimum_distance"] = isect::minimum_weight(C, cfg);
  if (wdist) {
    const auto en = isect::weight_distribution_enumerated(C, cfg);
    const auto cf = isect::mds_weight_distribution(static_cast<std::int64_t>(C.length()), static_cast<std::int64_t>(C.dim()), C.q());
    json e = json::array(), c = json::array();
    bool match = en.size() == cf.size();
    for (std::size_t w = 0; w < en.size(); ++w) {
      e.push_back(en[w]);
      if (w < cf.size()) match = match && BigInt(en[w]) == cf[w];
    }
    for (const auto& v : cf) c.push_back(io::big(v));
    j["weight_distribution"] = {{"enumerated", e}, {"mds_closed_form", c}, {"match", match}};
  }
  if (extend) {
    const auto r = isect::extend_code(C, cfg);
    json added = json::array();
    for (const auto& P : r.added) added.push_back(isect::to_string(P));
    json x;
    x["added"] = added;
    x["code"] = io::code_to_json(r.code);
    x["module_after"] = isect::module_property_check(r.code, cfg).holds;
    j["extension"] = x;
  }
  return j;
}

json nrc_report(std::uint32_t q, std::size_t k, const isect::Config& cfg) {
  const auto p = isect::nrc_profile(q, k, cfg);
  json j;
  j["q"] = q;
  j["k"] = k;
  json e = json::array(), c = json::array(), v = json::array();
  for (auto x : p.enumerated) e.push_back(x);
  for (const auto& x : p.closed_form) c.push_back(io::big(x));
  for (const auto& x : p.printed_variant) v.push_back(io::big(x));
  j["enumerated"] = e;
  j["closed_form"] = c;
  j["printed_variant"] = v;
  j["closed_form_matches"] = true;
  bool printed_ok = true;
  for (std::size_t t = 0; t < p.enumerated.size(); ++t) printed_ok = printed_ok && BigInt(p.enumerated[t]) == p.printed_variant[t];
  j["printed_variant_matches"] = printed_ok;
  return j;
}

json mu_report(std::int64_t kmax) {
  const auto m = isect::mu_checks(kmax);
  json j;
  j["k_max"] = kmax;
  j["sums_to_one"] = m.sums_to_one;
  j["shift_identity"] = m.shift_identity;
  json vals = json::array();
  for (std::int64_t k = 0; k <= kmax; ++k) vals.push_back(io::rational(isect::mu(k, 0)));
  j["mu_k0"] = vals;
  return j;
}

json gamma_json(const isect::LinearCode& C, const std::vector<std::size_t>& T, const isect::Config& cfg) {
  const auto g = isect::gamma_T_details(C, T, cfg);
  json j;
  j["kind"] = "gamma_spectrum";
  j["code"] = io::code_to_json(C);
  j["T"] = t_list(g.avoid.T);
  j["avoiding"] = g.avoid.size();
  j["avoid_set"] = g.avoid.hyperplanes;
  j["eigenvalues"] = io::spectrum_to_json(g.spectrum);
  j["spectrum"] = isect::to_string(g.spectrum);
  if (g.avoid.T == std::vector<std::size_t>{0} && g.avoid.size() > 0) {
    try {
      j["hoffman_bound"] = io::rational(isect::hoffman_bound(g.spectrum, g.spectrum.vertex_count()));
    } catch (const Error&) {
    }
  }
  return j;
}

json b_json(const isect::LinearCode& C, std::size_t i, const isect::Config& cfg) {
  const auto d = isect::b_graph_details(C, i, cfg);
  json j;
  j["kind"] = "b_spectrum";
  j["code"] = io::code_to_json(C);
  j["i"] = i;
  j["Q"] = isect::to_string(d.Q);
  j["avoiding"] = io::big(d.M);
  const json b = io::bipartite_to_json(d.spectrum);
  j["pairs"] = b["pairs"];
  j["zero_mult"] = b["zero_mult"];
  json lines = json::array();
  for (const auto& l : d.lines) lines.push_back(json{{"direction", isect::to_string(l.line.dir)}, {"lambda", io::big(l.lambda)}});
  j["lines"] = lines;
  return j;
}

/// Re-verifies a stored spectrum; returns the failure message, if any.
std::optional<std::string> verify_spectrum_json(const json& j, const isect::Config& cfg) {
  const std::string kind = io::field_of<std::string>(j, "kind");
  if (!j.contains("code")) throw Error(Errc::BadInput, "missing field 'code'");
  const auto C = io::code_from_json(j["code"]);
  isect::VerifyReport r;
  if (kind == "gamma_spectrum") {
    const auto T = io::field_of<std::vector<std::size_t>>(j, "T");
    if (!j.contains("eigenvalues")) throw Error(Errc::BadInput, "missing field 'eigenvalues'");
    r = isect::verify_spectrum_exact(C, T, io::spectrum_from_json(j["eigenvalues"]), cfg);
  } else if (kind == "b_spectrum") {
    r = isect::verify_b_spectrum(C, io::field_of<std::size_t>(j, "i"), io::bipartite_from_json(j), cfg);
  } else {
    throw Error(Errc::BadInput, "unknown spectrum kind '" + kind + "'");
  }
  if (!r.ok) return r.message;
  return std::nullopt;
}

json ekr_report(const isect::LinearCode& C, const std::string& which, const isect::Config& cfg) {
  json j;
  if (which == "weak" || which == "all") {
    const auto w = isect::weak_ekr_check(C, cfg);
    j["weak"] = w.status == isect::WeakEkr::Holds ? "holds" : "all_intersecting";
    j["avoiding"] = io::big(w.avoiding);
    j["max_family_size"] = io::big(w.max_family_size);
  }
  if (which == "module" || which == "all") {
    const auto m = isect::module_property_check(C, cfg);
    j["module"] = m.holds;
    j["witness"] = m.witness ? json(isect::to_string(*m.witness)) : json(nullptr);
  }
  if (which == "strict" || which == "all") {
    const auto s = isect::strict_condition_check(C, cfg);
    j["strict"] = s.holds;
    j["no_three_collinear"] = s.no_three_collinear;
    if (!s.reason.empty()) j["reason"] = s.reason;
    j["worst_ratio"] = io::rational(s.worst_ratio);
  }
  return j;
}

json bounds_report(std::uint32_t q, std::size_t k, std::size_t t, const isect::Config& cfg) {
  const auto tb = isect::t_int_upper_bound(q, static_cast<std::int64_t>(k), static_cast<std::int64_t>(t));
  json j;
  j["q"] = q;
  j["k"] = k;
  j["t"] = t;
  BigInt bound = tb.max_size();
  j["t_int"] = {{"value", io::rational(tb.value)}, {"strict", tb.strict}, {"max_size", io::big(tb.max_size())}};
  if (t == k && (k == 2 || k == 3)) {
    const auto family = k == 2 ? isect::SchemeFamily::Hom2 : isect::SchemeFamily::Hom3;
    const std::size_t rel = k;  // k distinct roots
    json d;
    BigInt db;
    if (isect::checked_pow(q, k + 1) <= cfg.full_check_cap) {
      db = isect::scheme_clique_bound(isect::scheme_eigenmatrices(family, q, cfg), {rel});
      d["source"] = "enumerated";
    } else {
      const auto T = isect::closed_form_table(family, q);
      isect::EigenMatrices E;
      E.P = T.P;
      db = isect::scheme_clique_bound(E, {rel});
      d["source"] = T.applicable ? "closed_form" : "closed_form_unverified";
    }
    d["relation"] = "R" + std::to_string(rel);
    d["bound"] = io::big(db);
    j["delsarte"] = d;
    bound = std::min(bound, db);
  }
  j["bound"] = io::big(bound);
  j["strict"] = tb.strict;
  return j;
}

json family_json(const isect::LinearCode& C, const isect::Family& f) {
  json a = json::array();
  for (auto id : f.members) a.push_back(io::vec(C.coeff_at(id)));
  return a;
}

json search_report(const isect::LinearCode& C, std::size_t t, bool census, double timeout, const std::string& cert, const isect::Config& cfg,
                   bool table) {
  isect::SearchOptions o;
  o.t = t;
  o.census = census;
  o.timeout_seconds = timeout;
  const auto r = isect::max_intersecting_family(C, o, cfg);
  json j;
  j["q"] = C.q();
  j["n"] = C.length();
  j["k"] = C.dim() - 1;
  j["t"] = t;
  j["size"] = r.max_size;
  j["witness"] = family_json(C, r.witness);
  j["witness_tag"] = isect::classify_family(C, r.witness, t, cfg);
  if (table) {
    j["nodes"] = r.node_count;
    j["seconds"] = r.elapsed_seconds;
  }
  if (r.census) {
    json tags = json::object();
    std::map<std::string, std::size_t> counts;
    for (const auto& e : *r.census) ++counts[e.tag];
    for (const auto& [tag, n] : counts) tags[tag] = n;
    j["census"] = {{"families", r.census->size()}, {"tags", tags}};
  }
  if (t == 1) {
    bool few = true, bip = true, absorb = true;
    std::string msg;
    auto run = [&](const isect::Family& f) {
      const auto c = isect::check_family(C, f, cfg);
      few = few && c.few_or_many;
      bip = bip && c.bip_eml;
      absorb = absorb && c.absorption;
      if (msg.empty()) msg = c.message;
    };
    try {
      if (r.census)
        for (const auto& e : *r.census) run(e.family);
      else
        run(r.witness);
      j["checks"] = {{"few_or_many", few}, {"mixing_lemma", bip}, {"star_absorption", absorb}};
      if (!msg.empty()) j["checks"]["message"] = msg;
    } catch (const Error& e) {
      if (e.code() == Errc::TooLarge) throw;
      j["checks"] = {{"skipped", e.what()}};
    }
  }
  if (!cert.empty()) write_json_file(cert, io::certificate(C, t, r.witness));
  return j;
}

json scheme_report(isect::SchemeFamily fam, std::uint32_t q, bool verify, const std::string& bounds, const isect::Config& cfg) {
  const auto S = isect::build_scheme(fam, q, cfg);
  const auto E = isect::scheme_eigenmatrices(S, cfg);
  const auto m = isect::match_closed_form(fam, q, E);
  auto mat = [](const isect::IntMatrix& M) {
    json a = json::array();
    for (const auto& row : M) {
      json r = json::array();
      for (const auto& v : row) r.push_back(io::big(v));
      a.push_back(r);
    }
    return a;
  };
  json j;
  j["family"] = isect::to_string(fam);
  j["q"] = q;
  j["order"] = S.order();
  j["classes"] = S.class_sizes;
  j["P"] = mat(E.P);
  j["Q"] = mat(E.Q);
  json mult = json::array();
  for (const auto& v : E.multiplicities) mult.push_back(io::big(v));
  j["multiplicities"] = mult;
  j["matched_table"] = m.table;
  j["table_applicable"] = m.applicable;
  j["matched"] = m.matched;
  if (m.matched) {
    j["permutation"] = m.permutation;
    j["p_equals_q"] = m.p_equals_q;
    j["p_equals_q_transpose"] = m.p_equals_q_transpose;
    j["formally_self_dual"] = m.formally_self_dual;
  } else {
    j["mismatch"] = m.mismatch;
  }
  if (verify) {
    if (m.applicable && !m.matched) throw Error(Errc::TableMismatch, m.table + ": " + m.mismatch);
    const auto I = isect::intersection_numbers(S, cfg);
    j["intersection_numbers"] = {{"constant", true}, {"full", I.full}, {"checked_points", I.checked_points}};
  }
  if (!bounds.empty()) j["clique_bound"] = io::big(isect::scheme_clique_bound(E, parse_list(bounds)));
  return j;
}

json stability_json(std::uint32_t q, std::size_t k, std::optional<std::string> delta3, std::int64_t kmax, const isect::Config& cfg) {
  const auto s = isect::stability_report(q, k, cfg);
  json j;
  j["q"] = q;
  j["k"] = k;
  j["no_three_collinear"] = s.no_three_collinear;
  j["length_ok"] = s.length_ok;
  j["avoiding"] = io::big(s.M);
  j["mu0"] = io::rational(s.mu0);
  j["tau"] = io::rational(s.tau);
  j["delta"] = io::rational(s.delta);
  j["one_minus_mu"] = io::rational(s.one_minus_mu);
  j["inv_sqrt2_dominates"] = s.inv_sqrt2_dominates;
  j["threshold_constant"] = s.threshold_constant;
  j["threshold"] = s.threshold_symbolic;
  j["threshold_value"] = s.threshold_value;
  if (k >= 2) {
    const auto p = isect::s_t_profile(q, k, cfg);
    json dev = json::array();
    for (const auto& d : p.max_deviation) dev.push_back(io::rational(d));
    j["s_t"] = {{"points", p.points.size()},
                {"max_deviation", dev},
                {"overall_max_deviation", io::rational(p.overall_max_deviation)},
                {"delta_observed", io::rational(p.delta_observed)},
                {"sanity_bound", p.sanity_bound}};
  }
  if (delta3) {
    Rational d3;
    try {
      d3 = Rational(*delta3);
    } catch (const std::exception&) {
      throw Error(Errc::BadParameters, "bad --delta3 value");
    }
    json rec = json::array();
    for (std::int64_t kk = 3; kk <= kmax; ++kk) rec.push_back(json{{"k", kk}, {"delta", io::rational(isect::delta_recursion(d3, kk))}});
    j["delta_recursion"] = rec;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact intersecting-family computations for linear codes and polynomial schemes"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--cache-dir", g.cache_dir, "Directory for cached results");
  app.add_option("--enum-cap", g.enumeration_cap, "Cap on vectors touched by a full scan")->check(CLI::PositiveNumber);
  app.add_option("--search-cap", g.search_cap, "Cap on codewords for a size-only search")->check(CLI::PositiveNumber);
  app.add_option("--census-cap", g.census_cap, "Cap on codewords for a census")->check(CLI::PositiveNumber);
  app.add_option("--verify-cap", g.verify_cap, "Cap on vertices for spectrum verification")->check(CLI::PositiveNumber);
  app.add_flag_callback("--version", [] {
    std::cout << kToolVersion << "\n";
    std::exit(0);
  });

  std::uint32_t q = 0, p = 0, h = 1;
  std::size_t k = 0, t = 1, i = 0;
  bool flag_table = false, wdist = false, extend = false, verify = false, census = false, json_flag = false;
  std::string code_in, out_file, graph = "gamma0", T_str = "0", which, cert, spectrum_file, family, bounds, delta3;
  double timeout = 0;
  std::int64_t kmax = 12;

  auto* field = app.add_subcommand("field", "Field parameters and optional operation tables");
  field->set_help_flag("--help", "Print this help message and exit");
  field->add_option("--p", p, "Characteristic")->required();
  field->add_option("--h", h, "Extension degree");
  field->add_flag("--table", flag_table, "Include addition and multiplication tables");

  auto* code = app.add_subcommand("code", "Generator matrices and weight distributions");
  code->require_subcommand(1);
  auto* code_ers = code->add_subcommand("ers", "The extended Reed-Solomon code ERS(q,k)");
  code_ers->add_option("--q", q)->required();
  code_ers->add_option("--k", k)->required();
  auto* code_file = code->add_subcommand("file", "A code read from a generator-matrix file");
  code_file->add_option("--in", code_in)->required()->check(CLI::ExistingFile);
  for (auto* c : {code_ers, code_file}) {
    c->add_flag("--wdist", wdist, "Weight distribution, enumerated and closed form");
    c->add_flag("--extend", extend, "Add every point on no avoiding hyperplane");
    c->add_option("--out", out_file, "Write the generator matrix here (the extended one with --extend)");
  }

  auto* nrc = app.add_subcommand("nrc", "Hyperplane sections of the normal rational curve");
  nrc->require_subcommand(1);
  auto* nrc_profile = nrc->add_subcommand("profile", "Counts of hyperplanes meeting the curve in t points");
  nrc_profile->add_option("--q", q);
  nrc_profile->add_option("--k", k);
  auto* nrc_mu = nrc->add_subcommand("mu", "Identities of the mu constants");
  nrc_mu->add_option("--kmax", kmax)->capture_default_str();
  // Allow `nrc --q Q --k K profile`.
  nrc->add_option("--q", q);
  nrc->add_option("--k", k);

  auto* spectrum = app.add_subcommand("spectrum", "Spectra of Gamma_T and of the bipartite graph B");
  spectrum->add_option("--q", q);
  spectrum->add_option("--k", k);
  spectrum->add_option("--code", code_in, "Generator-matrix file instead of ERS(q,k)")->check(CLI::ExistingFile);
  spectrum->add_option("--graph", graph)->check(CLI::IsMember({"gamma0", "gammaT", "b"}))->capture_default_str();
  spectrum->add_option("--T", T_str, "Comma-separated meet counts")->capture_default_str();
  spectrum->add_option("--i", i, "Coordinate for the B graph");
  spectrum->add_flag("--verify", verify, "Verify the spectrum independently");
  spectrum->add_option("--out", out_file, "Write the spectrum JSON here");

  auto* ekr = app.add_subcommand("ekr", "Weak, module and strict EKR checks");
  ekr->add_option("--q", q);
  ekr->add_option("--k", k);
  ekr->add_option("--code", code_in)->check(CLI::ExistingFile);
  auto* ekr_check = ekr->add_subcommand("check", "Run a check");
  ekr_check->add_option("which", which)->required()->check(CLI::IsMember({"weak", "module", "strict", "all"}));
  ekr_check->add_flag("--json", json_flag, "Same as --format json");
  ekr->add_flag("--json", json_flag, "Same as --format json");
  ekr->require_subcommand(1);

  auto* bnds = app.add_subcommand("bounds", "Upper bounds on t-intersecting families of forms");
  bnds->add_option("--q", q)->required();
  bnds->add_option("--k", k)->required();
  bnds->add_option("--t", t)->required();

  auto* search = app.add_subcommand("search", "Exact maximum t-intersecting families");
  search->add_option("--q", q);
  search->add_option("--k", k);
  search->add_option("--code", code_in)->check(CLI::ExistingFile);
  search->add_option("--t", t)->capture_default_str();
  search->add_flag("--census", census, "List every maximum family");
  search->add_option("--timeout", timeout, "Seconds before giving up (0 = none)");
  search->add_option("--cert", cert, "Write a certificate for the witness");

  auto* ver = app.add_subcommand("verify", "Re-verify a certificate or a spectrum");
  ver->add_option("--cert", cert)->check(CLI::ExistingFile);
  ver->add_option("--spectrum", spectrum_file)->check(CLI::ExistingFile);

  auto* scheme = app.add_subcommand("scheme", "Translation schemes and eigenmatrices");
  scheme->add_option("--family", family)->required()->check(CLI::IsMember({"hom2", "hom3", "ternary2"}));
  scheme->add_option("--q", q)->required();
  scheme->add_flag("--verify", verify, "Require a table match and constant intersection numbers");
  scheme->add_option("--bounds", bounds, "Clique bound for a class, e.g. R3");

  auto* stab = app.add_subcommand("stability", "Stability hypotheses for ERS(q,k)");
  stab->add_option("--q", q)->required();
  stab->add_option("--k", k)->required();
  stab->add_option("--delta3", delta3, "Start value for the delta recursion");
  stab->add_option("--kmax", kmax, "Last k of the delta recursion")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (json_flag) g.format = "json";
  const isect::Config cfg = g.config();
  const ResultCache cache(g.cache_dir);

  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::BadParameters, what);
  };
  auto load_code = [&]() -> isect::LinearCode {
    if (!code_in.empty()) return io::code_from_json(read_json_file(code_in));
    need(q != 0 && k != 0, "give --q and --k, or --code");
    return isect::ers_create(q, k);
  };

  try {
    if (*field) {
      emit(g, cmd_field(p, h, flag_table, cfg));
    } else if (*code) {
      const auto C = code_ers->parsed() ? isect::ers_create(q, k) : io::code_from_json(read_json_file(code_in));
      if (!out_file.empty()) write_json_file(out_file, io::code_to_json(extend ? isect::extend_code(C, cfg).code : C));
      emit(g, code_report(C, wdist, extend, cfg));
    } else if (*nrc) {
      if (nrc_mu->parsed()) {
        emit(g, mu_report(kmax));
      } else {
        need(q != 0 && k != 0, "nrc profile needs --q and --k");
        emit(g, cached(cache, "nrc|" + std::to_string(q) + "|" + std::to_string(k), [&] { return nrc_report(q, k, cfg); }));
      }
    } else if (*spectrum) {
      const auto C = load_code();
      json j;
      if (graph == "b") {
        j = cached(cache, "b|" + code_key(C) + "|" + std::to_string(i), [&] { return b_json(C, i, cfg); });
      } else {
        const auto T = graph == "gamma0" ? std::vector<std::size_t>{0} : parse_list(T_str);
        std::string key = "gamma|" + code_key(C) + "|";
        for (auto x : T) key += std::to_string(x) + ",";
        j = cached(cache, key, [&] { return gamma_json(C, T, cfg); });
      }
      if (!out_file.empty()) {
        json file = j;
        file["schema_version"] = io::kSchemaVersion;
        write_json_file(out_file, file);
      }
      if (verify) {
        if (auto fail = verify_spectrum_json(j, cfg)) throw Rejected{*fail};
        j["verified"] = true;
      }
      j.erase("code");
      j.erase("avoid_set");
      emit(g, j);
    } else if (*ekr) {
      emit(g, ekr_report(load_code(), which, cfg));
    } else if (*bnds) {
      emit(g, bounds_report(q, k, t, cfg));
    } else if (*search) {
      emit(g, search_report(load_code(), t, census, timeout, cert, cfg, g.format == "table"));
    } else if (*ver) {
      need(cert.empty() != spectrum_file.empty(), "give exactly one of --cert or --spectrum");
      json j;
      if (!cert.empty()) {
        const auto c = io::verify_certificate(read_json_file(cert));
        j["kind"] = "intersecting_family";
        j["size"] = c.size;
        j["valid"] = c.report.ok;
        if (!c.report.ok) j["message"] = c.report.message;
      } else {
        const auto fail = verify_spectrum_json(read_json_file(spectrum_file), cfg);
        j["kind"] = "spectrum";
        j["valid"] = !fail;
        if (fail) j["message"] = *fail;
      }
      emit(g, j);
      if (!j["valid"].get<bool>()) {
        std::cerr << "verification failed: " << j["message"].get<std::string>() << "\n";
        return kVerifyFailed;
      }
    } else if (*scheme) {
      const auto fam = isect::parse_scheme_family(family);
      const std::string key = "scheme|" + family + "|" + std::to_string(q) + "|" + (verify ? "v" : "") + "|" + bounds;
      emit(g, cached(cache, key, [&] { return scheme_report(fam, q, verify, bounds, cfg); }));
    } else if (*stab) {
      emit(g, stability_json(q, k, delta3.empty() ? std::nullopt : std::optional<std::string>(delta3), kmax, cfg));
    }
  } catch (const Rejected& r) {
    std::cerr << "verification failed: " << r.message << "\n";
    return kVerifyFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
