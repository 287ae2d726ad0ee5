#pragma once

// Dense-map polynomial used as an independent reference in tests. Shares no
// code with the library's packed representation.

#include <gmpxx.h>

#include <map>
#include <vector>

namespace arf::test {

struct NaivePoly {
  int nvars = 0;
  std::map<std::vector<int>, mpq_class> terms;

  explicit NaivePoly(int nv) : nvars(nv) {}

  static NaivePoly constant(int nv, mpq_class c) {
    NaivePoly p(nv);
    if (c != 0) p.terms[std::vector<int>(nv, 0)] = c;
    return p;
  }
  static NaivePoly var(int nv, int v) {
    NaivePoly p(nv);
    std::vector<int> e(nv, 0);
    e[v] = 1;
    p.terms[e] = 1;
    return p;
  }

  NaivePoly operator+(const NaivePoly& o) const {
    NaivePoly r = *this;
    for (const auto& [e, c] : o.terms) {
      r.terms[e] += c;
      if (r.terms[e] == 0) r.terms.erase(e);
    }
    return r;
  }
  NaivePoly operator-(const NaivePoly& o) const { return *this + o * constant(nvars, -1); }
  NaivePoly operator*(const NaivePoly& o) const {
    NaivePoly r(nvars);
    for (const auto& [e1, c1] : terms)
      for (const auto& [e2, c2] : o.terms) {
        std::vector<int> e(nvars);
        for (int i = 0; i < nvars; ++i) e[i] = e1[i] + e2[i];
        r.terms[e] += c1 * c2;
        if (r.terms[e] == 0) r.terms.erase(e);
      }
    return r;
  }
  bool operator==(const NaivePoly& o) const { return terms == o.terms; }
  bool is_zero() const { return terms.empty(); }
};

}  // namespace arf::test
