#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "swb/error.hpp"
#include "swb/text/tokenize.hpp"

namespace swb::measures {

// Named sub-scores of one measure for one candidate/reference pair.
struct MeasureScore {
  std::string measure;
  std::map<std::string, double> values;

  bool operator==(const MeasureScore&) const = default;
};

using TokenSpan = std::span<const text::Token>;

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline PRF make_prf(double matches, double candidate_total, double reference_total) {
  PRF r;
  r.precision = candidate_total > 0 ? matches / candidate_total : 0.0;
  r.recall = reference_total > 0 ? matches / reference_total : 0.0;
  r.f1 = r.precision + r.recall > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

inline void require_text(TokenSpan candidate, std::span<const TokenSpan> references) {
  if (candidate.empty()) throw Error(Errc::EmptyText, "candidate has no tokens");
  if (references.empty()) throw Error(Errc::EmptyText, "no reference given");
  for (TokenSpan r : references) {
    if (r.empty()) throw Error(Errc::EmptyText, "reference has no tokens");
  }
}

}  // namespace swb::measures
