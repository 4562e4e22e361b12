#include "spectra_lab/word_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "spectra_lab/errors.hpp"
#include "spectra_lab/limit_integrals.hpp"
#include "spectra_lab/parallel.hpp"

namespace spectra_lab {
namespace {

constexpr int kMaxCandidates = 4;

void require_pair_matched(const Word& w) {
  if (!w.is_pair_matched()) throw DomainError("word '" + w.letters() + "' is not pair-matched");
}

int exact_fanout(LinkKind kind) {
  switch (kind) {
    case LinkKind::Wigner:
    case LinkKind::Hankel:
    case LinkKind::ReverseCirculant:
      return 1;
    case LinkKind::Toeplitz:
    case LinkKind::SymmetricCirculant:
      return 2;
    case LinkKind::PalindromicToeplitz:
      return 3;
  }
  return 4;
}

// Depth-first enumeration of the circuits of a word. First occurrences range over 1..n,
// repeats are solved from the match relation.
class CircuitWalker {
 public:
  CircuitWalker(const Word& w, MatchRelation relation, LinkKind kind, int n)
      : relation_(relation), kind_(kind), n_(n), h_(w.length()), pi_(static_cast<std::size_t>(h_ + 1)) {
    first_.resize(static_cast<std::size_t>(h_ + 1));
    partner_.resize(static_cast<std::size_t>(h_ + 1));
    for (int i = 1; i <= h_; ++i) {
      first_[static_cast<std::size_t>(i)] = w.is_first_occurrence(i);
      partner_[static_cast<std::size_t>(i)] = w.partner(i);
    }
  }

  // leaf(pi, skew product, modified product, loopless)
  template <class Leaf>
  void run_from(int start, Leaf& leaf) {
    pi_[0] = start;
    descend(1, 1, 1, true, leaf);
  }

 private:
  int candidates(int i, std::array<int, kMaxCandidates>& out) const {
    const int prev = pi_[static_cast<std::size_t>(i - 1)];
    const int p = partner_[static_cast<std::size_t>(i)];
    const int a = pi_[static_cast<std::size_t>(p - 1)];
    const int b = pi_[static_cast<std::size_t>(p)];
    int count = 0;
    const auto push = [&](int c) {
      if (c < 1 || c > n_) return;
      for (int q = 0; q < count; ++q) {
        if (out[static_cast<std::size_t>(q)] == c) return;
      }
      out[static_cast<std::size_t>(count++)] = c;
    };
    switch (relation_) {
      case MatchRelation::ToeplitzSum:
        push(prev - (b - a));
        return count;
      case MatchRelation::CirculantSum: {
        const int base = prev - (b - a);
        push(base);
        push(base - n_);
        push(base + n_);
        return count;
      }
      case MatchRelation::ExactL:
        break;
    }
    const LinkKey key = link_value(kind_, n_, a, b);
    std::array<int, kMaxCandidates> raw{};
    int m = 0;
    const auto d = static_cast<int>(key.primary);
    switch (kind_) {
      case LinkKind::Wigner:
        if (prev == key.primary) raw[static_cast<std::size_t>(m++)] = static_cast<int>(key.secondary);
        if (prev == key.secondary) raw[static_cast<std::size_t>(m++)] = d;
        break;
      case LinkKind::Toeplitz:
        raw = {prev - d, prev + d};
        m = 2;
        break;
      case LinkKind::Hankel:
        raw[static_cast<std::size_t>(m++)] = d - prev;
        break;
      case LinkKind::SymmetricCirculant:
        raw = {prev - d, prev + d, prev - (n_ - d), prev + (n_ - d)};
        m = 4;
        break;
      case LinkKind::ReverseCirculant: {
        int c = ((d - prev) % n_ + n_) % n_;
        raw[static_cast<std::size_t>(m++)] = c == 0 ? n_ : c;
        break;
      }
      case LinkKind::PalindromicToeplitz:
        raw = {prev - d, prev + d, prev - (n_ - 1 - d), prev + (n_ - 1 - d)};
        m = 4;
        break;
    }
    for (int q = 0; q < m; ++q) {
      const int c = raw[static_cast<std::size_t>(q)];
      if (c >= 1 && c <= n_ && link_value(kind_, n_, prev, c) == key) push(c);
    }
    return count;
  }

  template <class Leaf>
  void step(int i, int c, int skew, int mod, bool loopless, Leaf& leaf) {
    const int prev = pi_[static_cast<std::size_t>(i - 1)];
    pi_[static_cast<std::size_t>(i)] = c;
    const int s = skew * skew_sign(prev, c);
    const int m = mod * modified_sign(n_, prev, c);
    const bool ll = loopless && prev != c;
    if (i == h_) {
      leaf(pi_, s, m, ll);
    } else {
      descend(i + 1, s, m, ll, leaf);
    }
  }

  template <class Leaf>
  void descend(int i, int skew, int mod, bool loopless, Leaf& leaf) {
    if (first_[static_cast<std::size_t>(i)]) {
      // a pair-matched word never ends on a first occurrence, so i < h here
      for (int c = 1; c <= n_; ++c) step(i, c, skew, mod, loopless, leaf);
      return;
    }
    std::array<int, kMaxCandidates> cand{};
    const int count = candidates(i, cand);
    for (int q = 0; q < count; ++q) {
      const int c = cand[static_cast<std::size_t>(q)];
      if (i == h_ && c != pi_[0]) continue;
      step(i, c, skew, mod, loopless, leaf);
    }
  }

  MatchRelation relation_;
  LinkKind kind_;
  int n_;
  int h_;
  std::vector<int> pi_;
  std::vector<bool> first_;
  std::vector<int> partner_;
};

struct CountLeaf {
  SignedCount count;
  void operator()(const std::vector<int>&, int skew, int mod, bool loopless) {
    ++count.raw;
    count.loopless += loopless ? 1 : 0;
    count.signed_skew += skew;
    count.signed_modified += mod;
  }
};

void check_budget(const Word& w, MatchRelation relation, LinkKind kind, int n, double budget) {
  if (n < 1) throw DomainError("n must be positive");
  const double states = estimated_states(w, relation, kind, n);
  if (states > budget) {
    throw ResourceError("circuit enumeration for '" + w.letters() + "' at n=" + std::to_string(n) +
                            " needs about " + std::to_string(states) + " states",
                        static_cast<std::uint64_t>(std::min(states, 1.8e19)));
  }
}

SignedCount count_impl(const Word& w, MatchRelation relation, LinkKind kind, int n, double budget,
                       bool parallel) {
  require_pair_matched(w);
  check_budget(w, relation, kind, n, budget);
  std::int64_t raw = 0, loopless = 0, skew = 0, mod = 0;
#pragma omp parallel num_threads(thread_count()) if (parallel) reduction(+ : raw, loopless, skew, mod)
  {
    CircuitWalker walker(w, relation, kind, n);
    CountLeaf leaf;
#pragma omp for schedule(dynamic)
    for (int start = 1; start <= n; ++start) walker.run_from(start, leaf);
    raw += leaf.count.raw;
    loopless += leaf.count.loopless;
    skew += leaf.count.signed_skew;
    mod += leaf.count.signed_modified;
  }
  return {raw, loopless, skew, mod};
}

int pow_minus_one(int e) { return e % 2 == 0 ? 1 : -1; }

}  // namespace

bool Circuit::loopless() const noexcept {
  for (std::size_t i = 1; i < pi.size(); ++i) {
    if (pi[i] == pi[i - 1]) return false;
  }
  return true;
}

int Circuit::skew_sign() const {
  int s = 1;
  for (std::size_t i = 1; i < pi.size(); ++i) s *= spectra_lab::skew_sign(pi[i - 1], pi[i]);
  return s;
}

int Circuit::modified_sign(int n) const {
  int s = 1;
  for (std::size_t i = 1; i < pi.size(); ++i) s *= spectra_lab::modified_sign(n, pi[i - 1], pi[i]);
  return s;
}

double estimated_states(const Word& w, MatchRelation relation, LinkKind kind, int n) {
  const int k = w.half_length();
  const int fanout = relation == MatchRelation::ExactL ? exact_fanout(kind) : 1;
  return std::pow(static_cast<double>(n), k + 1) * std::pow(static_cast<double>(fanout), k);
}

SignedCount count_circuits(const Word& w, MatchRelation relation, LinkKind kind, int n, double budget) {
  return count_impl(w, relation, kind, n, budget, true);
}

SignedCount count_circuits_serial(const Word& w, MatchRelation relation, LinkKind kind, int n,
                                  double budget) {
  return count_impl(w, relation, kind, n, budget, false);
}

void for_each_circuit(const Word& w, MatchRelation relation, LinkKind kind, int n,
                      const std::function<void(const Circuit&)>& visit, double budget) {
  require_pair_matched(w);
  check_budget(w, relation, kind, n, budget);
  CircuitWalker walker(w, relation, kind, n);
  Circuit circuit;
  auto leaf = [&](const std::vector<int>& pi, int, int, bool) {
    circuit.pi = pi;
    visit(circuit);
  };
  for (int start = 1; start <= n; ++start) walker.run_from(start, leaf);
}

double p_from_count(const SignedCount& c, SignKind sign, int k, int n) {
  const double scale = std::pow(static_cast<double>(n), k + 1);
  switch (sign) {
    case SignKind::Unsigned: return static_cast<double>(c.raw) / scale;
    case SignKind::Skew: return pow_minus_one(k) * static_cast<double>(c.signed_skew) / scale;
    case SignKind::Modified: return static_cast<double>(c.signed_modified) / scale;
  }
  return 0.0;
}

double p_estimate(const Word& w, MatchRelation relation, LinkKind kind, SignKind sign, int n, double budget) {
  return p_from_count(count_circuits(w, relation, kind, n, budget), sign, w.half_length(), n);
}

Extrapolation fit_inverse_n(std::span<const int> ladder, std::span<const double> values) {
  if (ladder.size() != values.size() || ladder.size() < 2) {
    throw DomainError("extrapolation needs at least two ladder points");
  }
  const double m = static_cast<double>(ladder.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double x = 1.0 / ladder[i];
    sx += x;
    sy += values[i];
    sxx += x * x;
    sxy += x * values[i];
  }
  const double det = m * sxx - sx * sx;
  if (det == 0.0) throw DomainError("extrapolation ladder needs two distinct n");
  Extrapolation e;
  e.ladder.assign(ladder.begin(), ladder.end());
  e.values.assign(values.begin(), values.end());
  e.slope = (m * sxy - sx * sy) / det;
  e.limit = (sy - e.slope * sx) / m;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double fit = e.limit + e.slope / ladder[i];
    e.residual = std::max(e.residual, std::abs(fit - values[i]));
  }
  return e;
}

Extrapolation extrapolate_p(const Word& w, MatchRelation relation, LinkKind kind, SignKind sign,
                            std::span<const int> ladder, double budget) {
  std::vector<double> values;
  values.reserve(ladder.size());
  for (const int n : ladder) values.push_back(p_estimate(w, relation, kind, sign, n, budget));
  return fit_inverse_n(ladder, values);
}

SignAudit circuit_sign_audit(const Word& w, LinkKind kind, int n, std::size_t max_examples) {
  require_pair_matched(w);
  const int k = w.half_length();
  SignAudit audit;
  audit.word = w;
  audit.kind = kind;
  audit.n = n;

  std::function<bool(const Circuit&)> in_scope;
  std::function<int(const Circuit&)> sign_of;
  std::function<bool(const Circuit&)> holds;

  switch (kind) {
    case LinkKind::Wigner:
      if (!is_catalan(w)) throw DomainError("the Wigner sign identity concerns Catalan words");
      audit.relation = MatchRelation::ExactL;
      audit.claim = "s_pi = (-1)^k if loopless, 0 otherwise";
      in_scope = [](const Circuit&) { return true; };
      sign_of = [](const Circuit& c) { return c.skew_sign(); };
      holds = [k](const Circuit& c) { return c.skew_sign() == (c.loopless() ? pow_minus_one(k) : 0); };
      break;
    case LinkKind::Toeplitz:
      audit.relation = MatchRelation::ToeplitzSum;
      audit.claim = "s_pi = (-1)^k on loopless circuits";
      in_scope = [](const Circuit& c) { return c.loopless(); };
      sign_of = [](const Circuit& c) { return c.skew_sign(); };
      holds = [k](const Circuit& c) { return c.skew_sign() == pow_minus_one(k); };
      break;
    case LinkKind::SymmetricCirculant:
      audit.relation = MatchRelation::CirculantSum;
      audit.claim = "e_pi even and s_pi = (-1)^(k - e_pi) on loopless circuits";
      in_scope = [](const Circuit& c) { return c.loopless(); };
      sign_of = [](const Circuit& c) { return c.skew_sign(); };
      holds = [k, &w](const Circuit& c) {
        int e = 0;
        for (int i = 1; i <= c.length(); ++i) {
          if (w.is_first_occurrence(i) && c.s(i) + c.s(w.partner(i)) != 0) ++e;
        }
        return e % 2 == 0 && c.skew_sign() == pow_minus_one(k - e);
      };
      break;
    case LinkKind::ReverseCirculant:
      audit.relation = MatchRelation::ExactL;
      audit.asserted = n % 2 == 1;
      audit.claim = audit.asserted ? "m_pi = 1 on circuits with m_pi != 0 (n odd)"
                                   : "split of m_pi on circuits with m_pi != 0 (n even, not asserted)";
      in_scope = [n](const Circuit& c) { return c.modified_sign(n) != 0; };
      sign_of = [n](const Circuit& c) { return c.modified_sign(n); };
      holds = [n](const Circuit& c) { return c.modified_sign(n) == 1; };
      break;
    default:
      throw DomainError("no sign identity to audit for " + to_string(kind));
  }

  for_each_circuit(w, audit.relation, kind, n, [&](const Circuit& c) {
    if (!in_scope(c)) return;
    ++audit.circuits_checked;
    const int s = sign_of(c);
    audit.sign_plus += s > 0 ? 1 : 0;
    audit.sign_minus += s < 0 ? 1 : 0;
    if (audit.asserted && !holds(c)) {
      ++audit.counterexample_count;
      if (audit.counterexamples.size() < max_examples) audit.counterexamples.push_back(c.pi);
    }
  });
  return audit;
}

double exact_expected_moment(LinkKind kind, std::span<const SignModifier> modifiers, int n, int two_k) {
  if (two_k < 2 || two_k % 2 != 0) throw DomainError("exact_expected_moment needs a positive even order");
  if (n < 1) throw DomainError("n must be positive");
  const double states = std::pow(static_cast<double>(n), two_k);
  if (states > 1e8) throw ResourceError("exact_expected_moment: n^{2k} above 1e8", static_cast<std::uint64_t>(states));

  const int h = two_k;
  std::vector<int> pi(static_cast<std::size_t>(h + 1));
  std::vector<LinkKey> keys(static_cast<std::size_t>(h));
  std::vector<LinkKey> sorted(static_cast<std::size_t>(h));
  std::int64_t total = 0;

  std::function<void(int, int)> walk = [&](int i, int mask) {
    if (i > h) {
      std::copy(keys.begin(), keys.end(), sorted.begin());
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t q = 0; q < sorted.size();) {
        std::size_t r = q;
        while (r < sorted.size() && sorted[r] == sorted[q]) ++r;
        if ((r - q) % 2 != 0) return;
        q = r;
      }
      total += mask;
      return;
    }
    const int prev = pi[static_cast<std::size_t>(i - 1)];
    const int lo = i == h ? pi[0] : 1;
    const int hi = i == h ? pi[0] : n;
    for (int c = lo; c <= hi; ++c) {
      const int m = mask * modifier_mask(modifiers, n, prev, c);
      if (m == 0) continue;
      pi[static_cast<std::size_t>(i)] = c;
      keys[static_cast<std::size_t>(i - 1)] = link_value(kind, n, prev, c);
      walk(i + 1, m);
    }
  };
  for (int start = 1; start <= n; ++start) {
    pi[0] = start;
    walk(1, 1);
  }
  const int k = h / 2;
  const int prefix = has_modifier(modifiers, SignModifier::Skew) ? pow_minus_one(k) : 1;
  return prefix * static_cast<double>(total) / std::pow(static_cast<double>(n), k + 1);
}

std::optional<KnownLimit> known_word_limit(const Word& w, LinkKind kind, SignKind sign) {
  require_pair_matched(w);
  const bool catalan = is_catalan(w);
  const bool symmetric = is_symmetric_word(w);
  if (catalan) {
    if (kind == LinkKind::PalindromicToeplitz && sign == SignKind::Modified) return std::nullopt;
    return KnownLimit{1.0, "Catalan word"};
  }
  switch (kind) {
    case LinkKind::Wigner:
      return KnownLimit{0.0, "non-Catalan word, Wigner link"};
    case LinkKind::Hankel:
      if (!symmetric) return KnownLimit{0.0, "non-symmetric word, Hankel link"};
      return std::nullopt;
    case LinkKind::ReverseCirculant:
      if (!symmetric) return KnownLimit{0.0, "non-symmetric word, reverse circulant link"};
      if (sign == SignKind::Skew) return std::nullopt;
      return KnownLimit{1.0, "symmetric word, reverse circulant link"};
    case LinkKind::SymmetricCirculant:
    case LinkKind::PalindromicToeplitz:
      if (sign == SignKind::Modified) return std::nullopt;
      return KnownLimit{1.0, "every word, circulant-type link"};
    case LinkKind::Toeplitz:
      return std::nullopt;
  }
  return std::nullopt;
}

MomentFromWords limiting_moment_via_words(LinkKind kind, SignKind sign, int two_k, LimitMethod method,
                                          const WordLimitOptions& options) {
  if (two_k < 2 || two_k % 2 != 0) throw DomainError("moment order must be positive and even");
  if (method == LimitMethod::FiniteN && two_k > 8) {
    throw DomainError("finite-n word sums are limited to order 8");
  }
  MomentFromWords out;
  out.kind = kind;
  out.sign = sign;
  out.order = two_k;
  double var = 0.0;

  for (const Word& w : enumerate_pair_matched(two_k / 2)) {
    WordContribution c;
    c.word = w;
    if (method == LimitMethod::Integral) {
      if (const auto known = known_word_limit(w, kind, sign)) {
        c.available = true;
        c.value = known->value;
        c.provenance = known->provenance;
      } else if (kind == LinkKind::Toeplitz || kind == LinkKind::Hankel) {
        const SignWeight weight = sign == SignKind::Unsigned ? SignWeight::Unit
                                  : sign == SignKind::Skew   ? SignWeight::Skew
                                                             : SignWeight::Modified;
        const IntegralEstimate est = word_limit_integral(w, kind, weight, options.samples, options.seed);
        c.available = true;
        c.value = est.value;
        c.uncertainty = 3.0 * est.std_error;
        c.provenance = "integral (" + to_string(est.method) + ", " + std::to_string(est.sample_count) + " samples)";
        var += est.std_error * est.std_error;
      } else {
        c.provenance = "no integral representation for this link";
      }
    } else {
      try {
        const Extrapolation e = extrapolate_p(w, MatchRelation::ExactL, kind, sign, options.ladder, options.budget);
        c.available = true;
        c.value = e.limit;
        c.uncertainty = e.residual;
        c.provenance = "finite-n extrapolation";
        out.uncertainty += e.residual;
      } catch (const ResourceError& err) {
        c.provenance = std::string("budget exceeded: ") + err.what();
      }
    }
    if (c.available) {
      out.value += c.value;
    } else {
      out.complete = false;
    }
    out.words.push_back(std::move(c));
  }
  out.uncertainty += 3.0 * std::sqrt(var);
  return out;
}

std::string to_string(MatchRelation relation) {
  switch (relation) {
    case MatchRelation::ExactL: return "exact-l";
    case MatchRelation::ToeplitzSum: return "toeplitz-sum";
    case MatchRelation::CirculantSum: return "circulant-sum";
  }
  return "?";
}

std::string to_string(SignKind sign) {
  switch (sign) {
    case SignKind::Unsigned: return "unsigned";
    case SignKind::Skew: return "skew";
    case SignKind::Modified: return "modified";
  }
  return "?";
}

std::string to_string(LimitMethod method) {
  return method == LimitMethod::FiniteN ? "finite-n" : "integral";
}

MatchRelation parse_match_relation(std::string_view name) {
  if (name == "exact-l" || name == "exact" || name == "pi*") return MatchRelation::ExactL;
  if (name == "toeplitz-sum" || name == "pi**") return MatchRelation::ToeplitzSum;
  if (name == "circulant-sum" || name == "pi'") return MatchRelation::CirculantSum;
  throw DomainError("unknown match relation '" + std::string(name) + "'");
}

SignKind parse_sign_kind(std::string_view name) {
  if (name == "unsigned" || name == "none") return SignKind::Unsigned;
  if (name == "skew") return SignKind::Skew;
  if (name == "modified") return SignKind::Modified;
  throw DomainError("unknown sign '" + std::string(name) + "'");
}

}  // namespace spectra_lab
