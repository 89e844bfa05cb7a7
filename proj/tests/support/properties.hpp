#pragma once

// Property checks shared by the unit tests and the acceptance runner. Each
// returns nothing on success and a description of the first mismatch
// otherwise.

#include <optional>
#include <string>

#include "yw/annotation.hpp"
#include "yw/model.hpp"

namespace yw::testing {

using Failure = std::optional<std::string>;

// Inferred channels against brute-force name matching.
Failure check_channels(const WorkflowModel& model);

// nested, containers, downstream, affected-by, upstream-inputs and
// deriving-blocks against PortClosure, for every block and port name.
Failure check_reachability(const WorkflowModel& model);

// Every view, rankdir, nesting mode and workflow focus: DOT well-formed,
// deterministic, and the counting formulas hold.
Failure check_views(const WorkflowModel& model);

Failure check_model_round_trip(const WorkflowModel& model);
Failure check_annotation_round_trip(const AnnotationDocument& doc);

}  // namespace yw::testing
