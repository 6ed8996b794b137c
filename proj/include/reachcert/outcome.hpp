#ifndef REACHCERT_OUTCOME_HPP
#define REACHCERT_OUTCOME_HPP

#include <optional>
#include <string>
#include <vector>

#include "reachcert/box.hpp"

namespace reachcert {

enum class Status { Proved, Disproved, Unknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Proved: return "Proved";
    case Status::Disproved: return "Disproved";
    default: return "Unknown";
  }
}

struct Witness {
  std::vector<double> point;
  double value = 0.0;
  int support_index = -1;  // set by checks quantified over disturbances
};

struct CheckOutcome {
  Status status = Status::Unknown;
  std::optional<Witness> witness;  // present iff Disproved
  std::vector<Box> frontier;       // undecided boxes when Unknown

  static CheckOutcome proved() { return {Status::Proved, std::nullopt, {}}; }
  static CheckOutcome disproved(Witness w) {
    return {Status::Disproved, std::move(w), {}};
  }
  static CheckOutcome unknown(std::vector<Box> frontier) {
    return {Status::Unknown, std::nullopt, std::move(frontier)};
  }
};

}  // namespace reachcert

#endif
