#include "rbez/multiindex.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "rbez/errors.hpp"

namespace rbez {

namespace {

void check_dim(int d) {
  if (d < 1 || d > 3) throw UnsupportedError("dimension must be 1, 2 or 3, got " + std::to_string(d));
}

// Depth-first enumeration in canonical (first entry most significant) order.
template <class Accept>
void recurse(MultiIndex& cur, int pos, const std::vector<int>& hi, Accept&& accept,
             std::vector<MultiIndex>& out) {
  if (pos == cur.size()) {
    if (accept(cur)) out.push_back(cur);
    return;
  }
  for (int v = 0; v <= hi[pos]; ++v) {
    cur[pos] = v;
    recurse(cur, pos + 1, hi, accept, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("integer overflow in combinatorial coefficient");
  return r;
}

IndexSet::IndexSet(const IndexSetSpec& spec) : spec_(spec) {
  std::vector<int> hi;
  int len = 0;
  switch (spec.type) {
    case IndexSetType::simplex_cartesian:
    case IndexSetType::simplex_barycentric: {
      check_dim(spec.d);
      if (spec.p < 0) throw DomainError("negative degree");
      len = spec.type == IndexSetType::simplex_cartesian ? spec.d : spec.d + 1;
      hi.assign(len, spec.p);
      break;
    }
    case IndexSetType::tensor:
    case IndexSetType::box: {
      check_dim(spec.bound.size());
      if (!spec.bound.nonnegative()) throw DomainError("negative degree");
      len = spec.bound.size();
      for (int j = 0; j < len; ++j) hi.push_back(spec.bound[j]);
      break;
    }
  }
  MultiIndex cur(len);
  const int p = spec.p;
  switch (spec.type) {
    case IndexSetType::simplex_cartesian:
      recurse(cur, 0, hi, [p](const MultiIndex& i) { return i.order() <= p; }, members_);
      break;
    case IndexSetType::simplex_barycentric:
      recurse(cur, 0, hi, [p](const MultiIndex& i) { return i.order() == p; }, members_);
      break;
    default:
      recurse(cur, 0, hi, [](const MultiIndex&) { return true; }, members_);
  }
  radix_ = 1 + *std::max_element(hi.begin(), hi.end());
  int table = 1;
  for (int j = 0; j < len; ++j) table *= radix_;
  lookup_.assign(table, -1);
  for (std::size_t n = 0; n < members_.size(); ++n) {
    int key = 0;
    for (int v : members_[n]) key = key * radix_ + v;
    lookup_[key] = static_cast<int>(n);
  }
}

int IndexSet::position(const MultiIndex& i) const {
  if (members_.empty() || i.size() != members_.front().size()) return -1;
  int key = 0;
  for (int v : i) {
    if (v < 0 || v >= radix_) return -1;
    key = key * radix_ + v;
  }
  return lookup_[key];
}

IndexSet enumerate(const IndexSetSpec& spec) { return IndexSet(spec); }

const IndexSet& index_set(const ElementKind& kind) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::unique_ptr<IndexSet>> cache;
  std::vector<int> key{static_cast<int>(kind.topology), kind.dim};
  for (int v : kind.degree) key.push_back(v);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) {
    if (kind.is_simplex())
      slot = std::make_unique<IndexSet>(IndexSetSpec::simplex_cartesian(kind.simplex_degree(), kind.dim));
    else
      slot = std::make_unique<IndexSet>(IndexSetSpec::tensor(kind.degree));
  }
  return *slot;
}

std::int64_t factorial(int n) {
  if (n < 0) throw DomainError("factorial of negative number");
  std::int64_t f = 1;
  for (int k = 2; k <= n; ++k) f = checked_mul(f, k);
  return f;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) throw DomainError("binomial(" + std::to_string(n) + "," + std::to_string(k) + ")");
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int t = 1; t <= k; ++t) r = checked_mul(r, n - k + t) / t;
  return r;
}

std::int64_t multichoose(int n, const MultiIndex& k) {
  if (!k.nonnegative() || k.order() > n) throw DomainError("invalid multi-index " + k.str() + " for n=" + std::to_string(n));
  std::int64_t r = 1;
  int rest = n;
  for (int v : k) {
    r = checked_mul(r, binomial(rest, v));
    rest -= v;
  }
  return r;
}

std::int64_t multichoose(const MultiIndex& n, const MultiIndex& k) {
  if (n.size() != k.size() || !k.nonnegative() || !k.dominated_by(n))
    throw DomainError("invalid multi-index " + k.str() + " for " + n.str());
  std::int64_t r = 1;
  for (int j = 0; j < n.size(); ++j) r = checked_mul(r, binomial(n[j], k[j]));
  return r;
}

MultiIndex to_barycentric(const MultiIndex& i, int p) {
  if (i.order() > p || !i.nonnegative()) throw DomainError("index " + i.str() + " not in simplex set of degree " + std::to_string(p));
  MultiIndex b(i.size() + 1);
  for (int j = 0; j < i.size(); ++j) b[j] = i[j];
  b[i.size()] = p - i.order();
  return b;
}

MultiIndex to_cartesian(const MultiIndex& bary) {
  MultiIndex c(bary.size() - 1);
  for (int j = 0; j < c.size(); ++j) c[j] = bary[j];
  return c;
}

std::vector<std::vector<int>> composition_pairs(int j, int k) {
  std::vector<std::vector<int>> out;
  if (j < 0 || k < 0 || j > k) return out;
  std::vector<int> cur(k, 0);
  // m runs over parts 1..k; count = remaining parts, weight = remaining weighted sum
  auto rec = [&](auto&& self, int m, int count, int weight) -> void {
    if (m > k) {
      if (count == 0 && weight == 0) out.push_back(cur);
      return;
    }
    for (int c = 0; c <= count && c * m <= weight; ++c) {
      cur[m - 1] = c;
      self(self, m + 1, count - c, weight - c * m);
    }
    cur[m - 1] = 0;
  };
  rec(rec, 1, j, k);
  return out;
}

Rational Rational::make(std::int64_t n, std::int64_t d) {
  if (d == 0) throw DomainError("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  return {n / g, d / g};
}

}  // namespace rbez
