#pragma once

#include <string>
#include <vector>

#include "iostd/finding.hpp"
#include "iostd/spec.hpp"

namespace iostd {

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return !has_errors(findings); }
  bool has(const std::string& code) const;
  std::string text(ReportFormat fmt = ReportFormat::Lines) const { return render(findings, fmt); }
};

/// Static well-formedness of a behavior description, decided by exhaustive
/// enumeration over the declared finite domains:
///  - every diagram-state label is satisfiable, and the labels of two states
///    of one service exclude each other;
///  - for every transition and every binding satisfying label and
///    precondition, some successor satisfies the postcondition and the
///    target label;
///  - the return discipline: sequentially callable services end every
///    completing transition with exactly one trailing `ret`, only the last
///    output may be non-concurrent, and wait states are resumed by `ret` only.
/// Findings are ordered by service, then location, then code.
ValidationReport validate(const BehaviorDescription& beh,
                          const Universe& universe = Universe::defaults());

}  // namespace iostd
