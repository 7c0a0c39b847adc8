#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdcluster {

enum class TripleDefect { RootOutOfRange, NotInjective, NotOriented, NotNilpotent };

inline const char* to_string(TripleDefect d) {
  switch (d) {
    case TripleDefect::RootOutOfRange: return "RootOutOfRange";
    case TripleDefect::NotInjective: return "NotInjective";
    case TripleDefect::NotOriented: return "NotOriented";
    case TripleDefect::NotNilpotent: return "NotNilpotent";
  }
  return "?";
}

class TripleValidationError : public std::runtime_error {
 public:
  TripleValidationError(TripleDefect defect, int root, const std::string& msg)
      : std::runtime_error(msg), defect_(defect), root_(root) {}
  TripleDefect defect() const { return defect_; }
  int root() const { return root_; }

 private:
  TripleDefect defect_;
  int root_;
};

// Partial map on the simple-root indices [1, n-1]. The map must be injective,
// orientation-preserving and adjacency-respecting on its domain, and every
// orbit must eventually leave the domain.
class BDTriple {
 public:
  static BDTriple validate(int n, const std::vector<std::pair<int, int>>& pairs) {
    if (n < 2) throw std::invalid_argument("matrix size must be at least 2");
    BDTriple t;
    t.n_ = n;
    for (auto [src, dst] : pairs) {
      if (src < 1 || src > n - 1)
        throw TripleValidationError(TripleDefect::RootOutOfRange, src,
                                    "source root " + std::to_string(src) + " outside [1," +
                                        std::to_string(n - 1) + "]");
      if (dst < 1 || dst > n - 1)
        throw TripleValidationError(TripleDefect::RootOutOfRange, dst,
                                    "target root " + std::to_string(dst) + " outside [1," +
                                        std::to_string(n - 1) + "]");
      if (!t.map_.emplace(src, dst).second)
        throw TripleValidationError(TripleDefect::NotInjective, src,
                                    "source root " + std::to_string(src) + " mapped twice");
      if (!t.inv_.emplace(dst, src).second)
        throw TripleValidationError(TripleDefect::NotInjective, dst,
                                    "target root " + std::to_string(dst) + " hit twice");
    }
    for (auto& [src, dst] : t.map_) {
      t.dom_.insert(src);
      t.img_.insert(dst);
    }
    // orientation on consecutive roots
    for (int i : t.dom_) {
      if (t.dom_.count(i + 1) && t.map_.at(i + 1) != t.map_.at(i) + 1)
        throw TripleValidationError(TripleDefect::NotOriented, i,
                                    "adjacent roots " + std::to_string(i) + "," +
                                        std::to_string(i + 1) + " map to non-consecutive targets");
    }
    // non-adjacent roots must stay non-adjacent (the map is an isometry of
    // the sub-root-systems; orientation alone does not guarantee this)
    for (int i : t.dom_)
      for (int j : t.dom_) {
        if (j <= i + 1) continue;
        int di = t.map_.at(i), dj = t.map_.at(j);
        if (j - i >= 2 && (di - dj == 1 || dj - di == 1))
          throw TripleValidationError(TripleDefect::NotOriented, i,
                                      "distant roots " + std::to_string(i) + "," +
                                          std::to_string(j) + " map to adjacent targets");
      }
    // nilpotency: every orbit leaves the domain
    for (int start : t.dom_) {
      int cur = start;
      int steps = 0;
      while (t.dom_.count(cur)) {
        cur = t.map_.at(cur);
        if (++steps > n) {
          throw TripleValidationError(TripleDefect::NotNilpotent, start,
                                      "orbit of root " + std::to_string(start) +
                                          " never leaves the domain");
        }
      }
    }
    return t;
  }

  static BDTriple trivial(int n) { return validate(n, {}); }

  int n() const { return n_; }
  const std::set<int>& domain() const { return dom_; }  // sources
  const std::set<int>& image() const { return img_; }   // targets
  bool in_domain(int i) const { return dom_.count(i) != 0; }
  bool in_image(int i) const { return img_.count(i) != 0; }
  int gamma(int i) const { return map_.at(i); }
  int gamma_inv(int i) const { return inv_.at(i); }
  bool is_trivial() const { return dom_.empty(); }
  int k() const { return n_ - 1 - static_cast<int>(dom_.size()); }

  std::vector<std::pair<int, int>> pairs() const {
    return std::vector<std::pair<int, int>>(map_.begin(), map_.end());
  }

  BDTriple opposite() const {
    std::vector<std::pair<int, int>> swapped;
    for (auto& [s, d] : map_) swapped.emplace_back(d, s);
    return validate(n_, swapped);
  }

  bool operator==(const BDTriple& o) const { return n_ == o.n_ && map_ == o.map_; }

 private:
  BDTriple() = default;
  int n_ = 0;
  std::map<int, int> map_, inv_;
  std::set<int> dom_, img_;
};

struct Interval {
  int lo = 0, hi = -1;
  int len() const { return hi - lo + 1; }
  bool trivial() const { return lo == hi; }
  bool contains(int p) const { return lo <= p && p <= hi; }
  bool operator==(const Interval&) const = default;
};

// min{j in [1,n] \ roots : j >= i}
inline int plus_closure(const std::set<int>& roots, int n, int i) {
  for (int j = i; j <= n; ++j)
    if (!roots.count(j)) return j;
  throw std::logic_error("plus_closure: no admissible index");
}

// max{j in [0,n] \ roots : j < i}
inline int minus_closure(const std::set<int>& roots, int i) {
  for (int j = i - 1; j >= 0; --j)
    if (!roots.count(j)) return j;
  throw std::logic_error("minus_closure: no admissible index");
}

// The two run partitions of [1,n] cut by the domain (X side) and image
// (Y side) of the map, with the induced bijection on nontrivial runs.
struct RunDecomposition {
  std::vector<Interval> x_runs, y_runs;
  // x_to_y[i] = index of the image y-run, or -1 for trivial x-runs
  std::vector<int> x_to_y;
  std::vector<int> y_to_x;

  int x_run_of(int p) const { return run_of(x_runs, p); }
  int y_run_of(int p) const { return run_of(y_runs, p); }

  // Position maps between matched runs: p in a nontrivial x-run [a,b] goes to
  // a' + (p - a) in the matched y-run. Throws when p sits in a trivial run.
  int gamma_pos(int p) const {
    int xi = x_run_of(p);
    if (x_to_y[xi] < 0) throw std::logic_error("gamma_pos: trivial run");
    return y_runs[x_to_y[xi]].lo + (p - x_runs[xi].lo);
  }
  int gamma_star_pos(int p) const {
    int yi = y_run_of(p);
    if (y_to_x[yi] < 0) throw std::logic_error("gamma_star_pos: trivial run");
    return x_runs[y_to_x[yi]].lo + (p - y_runs[yi].lo);
  }
  bool x_run_nontrivial(int p) const { return x_to_y[x_run_of(p)] >= 0; }
  bool y_run_nontrivial(int p) const { return y_to_x[y_run_of(p)] >= 0; }

 private:
  static int run_of(const std::vector<Interval>& rs, int p) {
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (rs[i].contains(p)) return static_cast<int>(i);
    throw std::out_of_range("run_of: position outside [1,n]");
  }
};

inline std::vector<Interval> cut_runs(const std::set<int>& roots, int n) {
  std::vector<Interval> runs;
  int a = 1;
  for (int i = 1; i <= n; ++i) {
    if (!roots.count(i)) {  // i = n always qualifies
      runs.push_back({a, i});
      a = i + 1;
    }
  }
  return runs;
}

inline RunDecomposition runs(const BDTriple& t) {
  RunDecomposition rd;
  rd.x_runs = cut_runs(t.domain(), t.n());
  rd.y_runs = cut_runs(t.image(), t.n());
  rd.x_to_y.assign(rd.x_runs.size(), -1);
  rd.y_to_x.assign(rd.y_runs.size(), -1);
  for (std::size_t xi = 0; xi < rd.x_runs.size(); ++xi) {
    const Interval& run = rd.x_runs[xi];
    if (run.trivial()) continue;
    int target = t.gamma(run.lo);  // run roots are [lo, hi-1]
    for (std::size_t yi = 0; yi < rd.y_runs.size(); ++yi) {
      if (rd.y_runs[yi].contains(target)) {
        // validated triples map run root blocks onto run root blocks
        if (rd.y_runs[yi].lo != target || rd.y_runs[yi].len() != run.len())
          throw std::logic_error("runs: image block is not a full run");
        rd.x_to_y[xi] = static_cast<int>(yi);
        rd.y_to_x[yi] = static_cast<int>(xi);
        break;
      }
    }
  }
  return rd;
}

}  // namespace bdcluster
