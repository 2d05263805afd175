#include "dividend/freq_shapley.hpp"

#include <algorithm>

namespace dividend {

CriticalSet critical_set_scan(const FrequencyValueFunction& vf, long size_a,
                              long size_b, bool label_matches) {
  if (size_a < 0 || size_b < 0) throw PreconditionError("critical_set: negative size");
  CriticalSet r;
  for (long a = 0; a <= size_a; ++a) {
    for (long b = 0; b <= size_b; ++b) {
      const Money d = delta_value(vf, a, b, label_matches);
      if (d != 0) r.push_back({a, b, d});
    }
  }
  return r;
}

CriticalSet critical_set(const FrequencyValueFunction& vf, long size_a, long size_b,
                         bool label_matches) {
  if (!vf.is_majority()) return critical_set_scan(vf, size_a, size_b, label_matches);
  if (size_a < 0 || size_b < 0) throw PreconditionError("critical_set: negative size");
  // A matching example changes the outcome only from a tie (a = b) or from
  // one short of a tie (a = b - 1); a mismatching one from a = b or a = b + 1.
  // Emitted in the scan's row-major order.
  const long lo = label_matches ? 0 : -1;
  const long hi = label_matches ? 1 : 0;
  CriticalSet r;
  for (long a = 0; a <= size_a; ++a) {
    for (long offset = lo; offset <= hi; ++offset) {
      const long b = a + offset;
      if (b < 0 || b > size_b) continue;
      const Money d = delta_value(vf, a, b, label_matches);
      if (d != 0) r.push_back({a, b, d});
    }
  }
  return r;
}

}  // namespace dividend
