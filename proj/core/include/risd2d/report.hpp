/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

namespace risd2d {

/// Outcome of one block update.
enum class StepStatus {
  Ok,
  Infeasible,
  SolverFailure,
  /// The rank-one phase extraction broke the D2D QoS and no feasible iterate
  /// was available to fall back on.
  ExtractionInfeasible,
};

inline const char* to_string(StepStatus s) {
  switch (s) {
    case StepStatus::Ok: return "ok";
    case StepStatus::Infeasible: return "infeasible";
    case StepStatus::SolverFailure: return "solver-failure";
    case StepStatus::ExtractionInfeasible: return "extraction-infeasible";
  }
  return "unknown";
}

}  // namespace risd2d
