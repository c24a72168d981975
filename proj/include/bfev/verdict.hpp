#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bfev/dist_core.hpp"

namespace bfev {

enum class Status { yes, no, inconclusive };

std::string to_string(Status s);

/// Points and the quantity whose sign settles a negative verdict.
struct Witness {
  std::string quantity;
  std::vector<Point> points;
  double value = 0.0;
};

struct Verdict {
  Status status = Status::inconclusive;
  std::string reason;
  /// Smallest slack over all checked inequalities: >= 0 means every check held,
  /// negative is the size of the worst violation.
  double margin = 0.0;
  std::optional<Witness> witness;
};

}  // namespace bfev
