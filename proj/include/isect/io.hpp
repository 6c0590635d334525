#pragma once

// JSON forms of codes, spectra and family certificates.

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "isect/codes.hpp"
#include "isect/error.hpp"
#include "isect/numeric.hpp"
#include "isect/spectral.hpp"

namespace isect::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Integers that fit in 64 bits become JSON numbers; larger ones become strings.
inline json big(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return to_string(v);
}

inline json rational(const Rational& r) {
  if (is_integer(r)) return big(boost::multiprecision::numerator(r));
  return to_string(r);
}

inline BigInt to_big(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw Error(Errc::BadInput, "expected an integer, got " + j.dump());
}

inline json vec(const Vec& v) {
  json a = json::array();
  for (Elem e : v) a.push_back(e.code);
  return a;
}

inline json code_to_json(const LinearCode& C) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["q"] = C.q();
  j["p"] = C.field().p();
  j["h"] = C.field().h();
  j["n"] = C.length();
  j["k"] = C.dim();
  json G = json::array();
  for (const auto& row : C.generator()) G.push_back(vec(row));
  j["G"] = G;
  return j;
}

template <class T>
T field_of(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::BadInput, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::BadInput, std::string("field '") + key + "': " + e.what());
  }
}

inline LinearCode code_from_json(const json& j) {
  const auto q = field_of<std::uint32_t>(j, "q");
  const auto p = field_of<std::uint32_t>(j, "p");
  const auto h = field_of<std::uint32_t>(j, "h");
  const auto F = Field::create(p, h);
  if (F->q() != q) throw Error(Errc::BadInput, "q differs from p^h");
  const auto rows = field_of<std::vector<std::vector<std::uint32_t>>>(j, "G");
  std::vector<Vec> G;
  for (const auto& r : rows) {
    Vec v;
    for (auto c : r) v.push_back(Elem{c});
    G.push_back(std::move(v));
  }
  LinearCode C(F, std::move(G));
  if (j.contains("n") && field_of<std::size_t>(j, "n") != C.length()) throw Error(Errc::BadInput, "n differs from the matrix width");
  if (j.contains("k") && field_of<std::size_t>(j, "k") != C.dim()) throw Error(Errc::BadInput, "k differs from the matrix height");
  return C;
}

inline json spectrum_to_json(const Spectrum& s) {
  json a = json::array();
  for (const auto& e : s.eigen) a.push_back(json{{"value", big(e.value)}, {"mult", big(e.mult)}});
  return a;
}

inline Spectrum spectrum_from_json(const json& a) {
  if (!a.is_array()) throw Error(Errc::BadInput, "eigenvalues must be an array");
  std::vector<std::pair<BigInt, BigInt>> pairs;
  for (const auto& e : a) {
    if (!e.contains("value") || !e.contains("mult")) throw Error(Errc::BadInput, "eigenvalue entries need value and mult");
    pairs.emplace_back(to_big(e["value"]), to_big(e["mult"]));
  }
  return make_spectrum(pairs);
}

inline json bipartite_to_json(const BipartiteSpectrum& b) {
  json a = json::array();
  for (const auto& p : b.pairs) a.push_back(json{{"lambda_sq", big(p.lambda_sq)}, {"pair_mult", big(p.pair_mult)}});
  return json{{"pairs", a}, {"zero_mult", big(b.zero_mult)}};
}

inline BipartiteSpectrum bipartite_from_json(const json& j) {
  BipartiteSpectrum b;
  if (!j.contains("pairs") || !j["pairs"].is_array()) throw Error(Errc::BadInput, "missing pairs");
  for (const auto& p : j["pairs"]) {
    if (!p.contains("lambda_sq") || !p.contains("pair_mult")) throw Error(Errc::BadInput, "pairs need lambda_sq and pair_mult");
    b.pairs.push_back({to_big(p["lambda_sq"]), to_big(p["pair_mult"])});
  }
  if (!j.contains("zero_mult")) throw Error(Errc::BadInput, "missing zero_mult");
  b.zero_mult = to_big(j["zero_mult"]);
  return b;
}

// ---------------------------------------------------------------------------
// Certificates for t-intersecting families.

inline json certificate(const LinearCode& C, std::size_t t, const Family& fam) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "intersecting_family";
  j["code"] = code_to_json(C);
  j["t"] = t;
  j["size"] = fam.size();
  json members = json::array();
  for (std::uint64_t id : fam.members) members.push_back(vec(C.coeff_at(id)));
  j["family"] = members;
  return j;
}

struct CertificateCheck {
  VerifyReport report;
  std::size_t size = 0;
};

/// Re-derives everything a certificate claims: the member count, membership
/// in the code, distinctness and pairwise t-intersection.
inline CertificateCheck verify_certificate(const json& j) {
  CertificateCheck out;
  if (field_of<int>(j, "schema_version") != kSchemaVersion) throw Error(Errc::BadInput, "unsupported schema_version");
  if (field_of<std::string>(j, "kind") != "intersecting_family") throw Error(Errc::BadInput, "not a family certificate");
  if (!j.contains("code")) throw Error(Errc::BadInput, "missing field 'code'");
  const LinearCode C = code_from_json(j["code"]);
  const auto t = field_of<std::size_t>(j, "t");
  const auto claimed = field_of<std::size_t>(j, "size");
  const auto members = field_of<std::vector<std::vector<std::uint32_t>>>(j, "family");
  out.size = members.size();
  if (members.size() != claimed) out.report.fail("size field says " + std::to_string(claimed) + " but the family lists " + std::to_string(members.size()));
  std::vector<Vec> words;
  std::set<std::vector<std::uint32_t>> seen;
  for (const auto& m : members) {
    if (m.size() != C.dim()) {
      out.report.fail("member of the wrong length");
      return out;
    }
    Vec v;
    for (auto c : m) {
      if (c >= C.q()) {
        out.report.fail("coefficient outside the field");
        return out;
      }
      v.push_back(Elem{c});
    }
    if (!seen.insert(m).second) out.report.fail("repeated member " + to_string(v, ','));
    words.push_back(C.encode(v));
  }
  for (std::size_t a = 0; a < words.size() && out.report.ok; ++a)
    for (std::size_t b = a + 1; b < words.size(); ++b)
      if (agreements(words[a], words[b]) < t) {
        out.report.fail("members " + std::to_string(a) + " and " + std::to_string(b) + " agree in fewer than " + std::to_string(t) + " positions");
        break;
      }
  return out;
}

}  // namespace isect::io
