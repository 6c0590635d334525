#pragma once

// Exact maximum t-intersecting families by branch and bound.
//
// Families are cliques of the graph "agree in at least t positions". The graph
// is invariant under translation by codewords, so the search is rooted at the
// zero codeword and runs over its neighbours only. Bounds come from greedy
// colouring of bitset candidate sets (colour classes are pairwise
// non-intersecting sets).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "isect/codes.hpp"
#include "isect/config.hpp"
#include "isect/ekr.hpp"
#include "isect/error.hpp"
#include "isect/spectral.hpp"

namespace isect {

namespace detail {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(__builtin_popcountll(x));
    return c;
  }
  /// Index of the lowest set bit, or size() when empty.
  std::size_t first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + static_cast<std::size_t>(__builtin_ctzll(w_[k]));
    return n_;
  }
  std::size_t size() const { return n_; }
  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  void and_not(const Bitset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
  }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      std::uint64_t x = w_[k];
      while (x) {
        fn(k * 64 + static_cast<std::size_t>(__builtin_ctzll(x)));
        x &= x - 1;
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

/// Branch and bound over a fixed graph given by adjacency bitsets.
class CliqueSearch {
 public:
  enum class Mode { Maximum, Enumerate, Exists };

  CliqueSearch(const std::vector<Bitset>& adj, std::chrono::steady_clock::time_point deadline, bool has_deadline)
      : adj_(adj), deadline_(deadline), has_deadline_(has_deadline) {}

  /// Greedy sequential colouring; vertices come out in nondecreasing colour order.
  void color_sort(const Bitset& P, std::vector<std::size_t>& order, std::vector<std::size_t>& color) const {
    order.clear();
    color.clear();
    Bitset U = P;
    std::size_t k = 0;
    while (U.any()) {
      ++k;
      Bitset Q = U;
      while (Q.any()) {
        const std::size_t v = Q.first();
        Q.reset(v);
        Q.and_not(adj_[v]);
        U.reset(v);
        order.push_back(v);
        color.push_back(k);
      }
    }
  }

  std::atomic<std::size_t>* best = nullptr;  // Maximum: size of the incumbent
  std::size_t target = 0;                    // Enumerate / Exists: clique size wanted
  Mode mode = Mode::Maximum;
  std::atomic<std::uint64_t>* nodes = nullptr;
  std::atomic<bool>* stop = nullptr;

  std::vector<std::size_t> current;
  std::vector<std::vector<std::size_t>> found;  // Maximum: improving cliques; Enumerate/Exists: hits

  void expand(Bitset P) {
    tick();
    std::vector<std::size_t> order, color;
    color_sort(P, order, color);
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (stop && stop->load(std::memory_order_relaxed)) return;
      const std::size_t size = current.size();
      if (mode == Mode::Maximum) {
        if (size + color[idx] <= best->load(std::memory_order_relaxed)) return;
      } else if (size + color[idx] < target) {
        return;
      }
      const std::size_t v = order[idx];
      current.push_back(v);
      const std::size_t now = current.size();
      if (mode == Mode::Maximum) {
        std::size_t b = best->load();
        while (now > b && !best->compare_exchange_weak(b, now)) {
        }
        if (now > b) found.push_back(current);
      } else if (now == target) {
        found.push_back(current);
        if (mode == Mode::Exists && stop) stop->store(true);
        current.pop_back();
        P.reset(v);
        if (mode == Mode::Exists) return;
        continue;
      }
      Bitset NP = P & adj_[v];
      if (NP.any()) expand(std::move(NP));
      current.pop_back();
      P.reset(v);
    }
  }

 private:
  void tick() {
    if (!nodes) return;
    const std::uint64_t n = nodes->fetch_add(1, std::memory_order_relaxed) + 1;
    if (has_deadline_ && (n & 1023) == 0 && std::chrono::steady_clock::now() > deadline_)
      throw Error(Errc::Timeout, "search exceeded its time limit");
  }

  const std::vector<Bitset>& adj_;
  std::chrono::steady_clock::time_point deadline_;
  bool has_deadline_;
};

}  // namespace detail

struct SearchOptions {
  std::size_t t = 1;
  bool census = false;
  double timeout_seconds = 0;  // 0 means no limit
};

struct CensusEntry {
  Family family;
  std::string tag;  // see classify_family
};

struct SearchResult {
  std::size_t max_size = 0;
  Family witness;  // lexicographically least maximum family
  std::uint64_t node_count = 0;
  double elapsed_seconds = 0;
  std::optional<std::vector<CensusEntry>> census;  // every maximum family, sorted
};

/// The family {v : v_1 = b} of ERS(q,2), i.e. a X^2 + b XY + c Y^2 for fixed b.
inline std::optional<Elem> b_line_of(const LinearCode& C, const Family& fam) {
  if (C.dim() != 3 || C.length() != C.q() + 1 || fam.size() != static_cast<std::size_t>(C.q()) * C.q()) return std::nullopt;
  const Elem b = C.coeff_at(fam.members[0])[1];
  for (std::uint64_t id : fam.members)
    if (C.coeff_at(id)[1] != b) return std::nullopt;
  return b;
}

/// True when the family is {c} plus all codewords of some star meeting c.
inline bool is_hm_family(const LinearCode& C, const Family& fam, const Config& cfg = default_config()) {
  if (fam.size() < 2) return false;
  std::vector<Vec> words;
  for (std::uint64_t id : fam.members) words.push_back(C.encode(C.coeff_at(id)));
  for (std::size_t i = 0; i < C.length(); ++i) {
    for (std::uint32_t a = 0; a < C.q(); ++a) {
      std::size_t inside = 0;
      std::optional<std::uint64_t> apex;
      for (std::size_t r = 0; r < words.size(); ++r) {
        if (words[r][i].code == a)
          ++inside;
        else
          apex = fam.members[r];
      }
      if (inside + 1 != fam.size() || !apex) continue;
      if (hm_family(C, i, Elem{a}, *apex, cfg) == fam) return true;
    }
  }
  return false;
}

/// True when the family is all codewords agreeing with its members on some t coordinates.
inline bool is_t_star(const LinearCode& C, const Family& fam, std::size_t t, const Config& cfg = default_config()) {
  if (fam.size() == 0) return false;
  const Vec w0 = C.encode(C.coeff_at(fam.members[0]));
  std::vector<std::size_t> common;
  for (std::size_t i = 0; i < C.length(); ++i) {
    bool all = true;
    for (std::uint64_t id : fam.members) all = all && C.encode(C.coeff_at(id))[i] == w0[i];
    if (all) common.push_back(i);
  }
  if (common.size() < t) return false;
  common.resize(t);
  Vec values;
  for (std::size_t i : common) values.push_back(w0[i]);
  return t_star(C, common, values, cfg) == fam;
}

/// One of star, t_star, contained-in-star, hm, b_line, other.
inline std::string classify_family(const LinearCode& C, const Family& fam, std::size_t t = 1, const Config& cfg = default_config()) {
  if (is_star(C, fam, cfg)) return "star";
  if (t > 1 && is_t_star(C, fam, t, cfg)) return "t_star";
  if (contained_in_star(C, fam)) return "contained-in-star";
  if (is_hm_family(C, fam, cfg)) return "hm";
  if (b_line_of(C, fam)) return "b_line";
  return "other";
}

inline SearchResult max_intersecting_family(const LinearCode& C, const SearchOptions& opt = {}, const Config& cfg = default_config()) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t N = C.size(cfg);
  if (N > cfg.search_cap) throw Error(Errc::TooLarge, std::to_string(N) + " codewords exceed the search cap");
  if (opt.census && N > cfg.census_cap) throw Error(Errc::TooLarge, std::to_string(N) + " codewords exceed the census cap");
  if (opt.t < 1 || opt.t > C.length()) throw Error(Errc::BadParameters, "t must lie in 1..n");
  const std::size_t n = C.length();
  const CodewordTable table(C, cfg);

  // Neighbours of the zero codeword: words with at least t zeros.
  std::vector<std::uint64_t> cand;
  for (std::uint64_t u = 1; u < N; ++u)
    if (table.agreements(0, u) >= opt.t) cand.push_back(u);
  const std::size_t m = cand.size();
  std::vector<detail::Bitset> adj(m, detail::Bitset(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (table.agreements(cand[a], cand[b]) >= opt.t) {
        adj[a].set(b);
        adj[b].set(a);
      }
  detail::Bitset all(m);
  for (std::size_t a = 0; a < m; ++a) all.set(a);

  const bool has_deadline = opt.timeout_seconds > 0;
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(opt.timeout_seconds));
  std::atomic<std::uint64_t> nodes{0};

  // Incumbent: the t-star through zero on the first t coordinates, if it is a clique.
  std::size_t seed = 0;
  {
    std::size_t members = 0;
    for (std::uint64_t u : cand) {
      bool in = true;
      for (std::size_t j = 0; j < opt.t; ++j) in = in && table.word(u)[j] == 0;
      members += in;
    }
    seed = members;  // the star is a clique: any two members share the t fixed coordinates
  }

  // Parallel branch and bound over the top-level branches.
  std::atomic<std::size_t> best{seed};
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.worker_count(), 64));
  auto run_top = [&](detail::CliqueSearch::Mode mode, std::size_t target, std::vector<std::vector<std::size_t>>& hits) {
    detail::CliqueSearch root(adj, deadline, has_deadline);
    std::vector<std::size_t> order, color;
    root.color_sort(all, order, color);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr err;
    auto work = [&] {
      try {
        detail::CliqueSearch s(adj, deadline, has_deadline);
        s.mode = mode;
        s.best = &best;
        s.target = target;
        s.nodes = &nodes;
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= order.size()) break;
          if (has_deadline && std::chrono::steady_clock::now() > deadline) throw Error(Errc::Timeout, "search exceeded its time limit");
          const std::size_t idx = order.size() - 1 - k;
          if (mode == detail::CliqueSearch::Mode::Maximum) {
            if (color[idx] <= best.load()) continue;
          } else if (color[idx] < target) {
            continue;
          }
          const std::size_t v = order[idx];
          detail::Bitset P(m);
          for (std::size_t j = 0; j < idx; ++j) P.set(order[j]);
          P &= adj[v];
          s.current.assign(1, v);
          if (mode == detail::CliqueSearch::Mode::Maximum) {
            std::size_t b = best.load();
            while (1 > b && !best.compare_exchange_weak(b, 1)) {
            }
            if (1 > b) s.found.push_back(s.current);
          } else if (target == 1) {
            s.found.push_back(s.current);
            continue;
          }
          if (P.any()) s.expand(std::move(P));
        }
        std::lock_guard<std::mutex> lock(mu);
        for (auto& f : s.found) hits.push_back(std::move(f));
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
  };

  std::vector<std::vector<std::size_t>> improving;
  run_top(detail::CliqueSearch::Mode::Maximum, 0, improving);
  const std::size_t omega = best.load();  // clique size among candidates
  SearchResult res;
  res.max_size = omega + 1;

  auto to_family = [&](const std::vector<std::size_t>& clique) {
    std::vector<std::uint64_t> ids{0};
    for (std::size_t a : clique) ids.push_back(cand[a]);
    return Family(std::move(ids));
  };

  // Lexicographically least rooted maximum clique, chosen greedily by index.
  {
    std::vector<std::size_t> chosen;
    detail::Bitset P = all;
    auto exists = [&](const detail::Bitset& Q, std::size_t need) {
      if (need == 0) return true;
      if (Q.count() < need) return false;
      // Greedy completion in index order first.
      {
        detail::Bitset R = Q;
        std::size_t got = 0;
        while (R.any() && got < need) {
          const std::size_t v = R.first();
          ++got;
          R &= adj[v];
        }
        if (got >= need) return true;
      }
      std::atomic<bool> stop{false};
      detail::CliqueSearch s(adj, deadline, has_deadline);
      s.mode = detail::CliqueSearch::Mode::Exists;
      s.target = need;
      s.nodes = &nodes;
      s.stop = &stop;
      s.expand(Q);
      return !s.found.empty();
    };
    for (std::size_t a = 0; a < m && chosen.size() < omega; ++a) {
      if (!P.test(a)) continue;
      detail::Bitset Q = P & adj[a];
      if (exists(Q, omega - chosen.size() - 1)) {
        chosen.push_back(a);
        P = std::move(Q);
      } else {
        P.reset(a);
      }
    }
    if (chosen.size() != omega) throw Error(Errc::VerificationFailed, "could not rebuild a maximum clique");
    res.witness = to_family(chosen);
  }

  if (opt.census) {
    std::vector<std::vector<std::size_t>> hits;
    if (omega == 0) {
      hits.emplace_back();
    } else {
      run_top(detail::CliqueSearch::Mode::Enumerate, omega, hits);
    }
    // Every maximum family is a translate of one through zero.
    std::set<std::vector<std::uint64_t>> fams;
    const detail::VectorGroup G(C.field(), C.dim(), N);
    for (const auto& h : hits) {
      const Family rooted = to_family(h);
      for (std::uint64_t c = 0; c < N; ++c) {
        std::vector<std::uint64_t> ids;
        ids.reserve(rooted.size());
        for (std::uint64_t x : rooted.members) ids.push_back(G.add(x, c));
        std::sort(ids.begin(), ids.end());
        fams.insert(std::move(ids));
      }
    }
    std::vector<CensusEntry> census;
    for (const auto& ids : fams) {
      Family f;
      f.members = ids;
      census.push_back({f, classify_family(C, f, opt.t, cfg)});
    }
    if (census.empty() || !(census.front().family == res.witness))
      throw Error(Errc::VerificationFailed, "census minimum differs from the greedy witness");
    res.census = std::move(census);
  }

  if (!is_intersecting_family(C, res.witness, opt.t)) throw Error(Errc::VerificationFailed, "witness is not t-intersecting");
  (void)n;
  res.node_count = nodes.load();
  res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

inline std::vector<CensusEntry> classify_maximum_families(const LinearCode& C, std::size_t t, const Config& cfg = default_config()) {
  SearchOptions o;
  o.t = t;
  o.census = true;
  return *max_intersecting_family(C, o, cfg).census;
}

// ---------------------------------------------------------------------------
// Checks of a concrete intersecting family against every star.

struct StarRow {
  std::size_t i;
  Elem alpha;
  std::size_t intersection;
  bool contains_family;
};

struct AbsorptionReport {
  BigInt threshold;  // q^{dim-1} - |M|
  std::vector<StarRow> rows;
  bool ok = true;
  std::string message;
};

/// Any star meeting the family in more than q^{dim-1} - |M| codewords must contain it.
inline AbsorptionReport verify_star_absorption(const LinearCode& C, const Family& fam, const Config& cfg = default_config()) {
  const CodeGeometry geo(C, cfg);
  AbsorptionReport r;
  r.threshold = ipow(BigInt(C.q()), C.dim() - 1) - BigInt(geo.hyperplanes_meeting({0}).size());
  std::vector<Vec> words;
  for (std::uint64_t id : fam.members) words.push_back(C.encode(C.coeff_at(id)));
  for (std::size_t i = 0; i < C.length(); ++i) {
    std::vector<std::size_t> cnt(C.q(), 0);
    for (const auto& w : words) ++cnt[w[i].code];
    for (std::uint32_t a = 0; a < C.q(); ++a) {
      const bool all = cnt[a] == words.size();
      r.rows.push_back({i, Elem{a}, cnt[a], all});
      if (BigInt(cnt[a]) > r.threshold && !all && r.ok) {
        r.ok = false;
        r.message = "star (" + std::to_string(i) + "," + std::to_string(a) + ") meets the family in " + std::to_string(cnt[a]) +
                    " codewords without containing it";
      }
    }
  }
  return r;
}

struct FamilyChecks {
  bool intersecting = true;
  bool few_or_many = true;  // |F cap star| |F \ star| <= lambda (q^{dim-1}/|M|)^2
  bool bip_eml = true;      // mixing-lemma inequality on B(C, i, alpha)
  bool absorption = true;
  std::optional<bool> more_than_few;  // some star reaches the lower bound (module property needed)
  std::string message;
};

/// Exact checks of the spectral inequalities on an intersecting family.
inline FamilyChecks check_family(const LinearCode& C, const Family& fam, const Config& cfg = default_config()) {
  FamilyChecks r;
  r.intersecting = is_intersecting_family(C, fam, 1);
  const auto absorb = verify_star_absorption(C, fam, cfg);
  r.absorption = absorb.ok;
  if (!absorb.ok) r.message = absorb.message;

  const BigInt q = C.q();
  const BigInt L = ipow(q, C.dim() - 1);
  const BigInt R = L * (q - 1);
  std::vector<Vec> words;
  for (std::uint64_t id : fam.members) words.push_back(C.encode(C.coeff_at(id)));
  const std::size_t n = C.length();
  std::size_t best_star = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = b_graph_details(C, i, cfg);
    if (d.M == 0) {
      r.message = "no avoiding hyperplanes; spectral checks skipped";
      return r;
    }
    BigInt lam = d.lines.front().lambda;
    for (const auto& l : d.lines) lam = std::max(lam, l.lambda);
    const Rational fm_bound = Rational(lam) * Rational(L, d.M) * Rational(L, d.M);
    for (std::uint32_t a = 0; a < C.q(); ++a) {
      std::vector<const Vec*> S, T;
      for (const auto& w : words) (w[i].code == a ? S : T).push_back(&w);
      best_star = std::max(best_star, S.size());
      const BigInt s = S.size(), t = T.size();
      if (Rational(s * t) > fm_bound && r.few_or_many) {
        r.few_or_many = false;
        r.message = "few-or-many bound violated at star (" + std::to_string(i) + "," + std::to_string(a) + ")";
      }
      BigInt e = 0;
      for (const Vec* x : S)
        for (const Vec* y : T) e += agreements(*x, *y) == 0;
      const BigInt lhs_in = e * L - d.M * s * t;
      const BigInt lhs = lhs_in * lhs_in * R;
      const BigInt rhs = lam * s * (L - s) * t * (R - t) * L;
      if (lhs > rhs && r.bip_eml) {
        r.bip_eml = false;
        r.message = "mixing-lemma inequality violated at star (" + std::to_string(i) + "," + std::to_string(a) + ")";
      }
    }
  }
  try {
    const Rational lower = more_than_few_bound(C, BigInt(fam.size()), cfg);
    r.more_than_few = Rational(best_star) >= lower;
  } catch (const Error& e) {
    if (e.code() != Errc::ModulePropertyFails) throw;
  }
  return r;
}

}  // namespace isect
