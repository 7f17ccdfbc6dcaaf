#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mcbsg {

enum class ErrorKind {
  // graph-core
  DuplicateNodeId,
  UnknownEndpoint,
  DuplicateEdge,
  SelfLoop,
  NonPositiveWeight,
  InvalidNode,
  CycleDetected,
  EmptyGraph,
  // allocator
  CostResolutionExceeded,
  ExcessCostPrecision,
  InvalidRequest,
  UnknownNode,
  // pathfinder
  NoFeasiblePath,
  // feedback
  EmptyPlan,
  MissingOutcome,
  UnknownEdge,
  InvalidMetric,
  InvalidConfig,
  // markov
  NegativeCount,
  ShapeMismatch,
  StateMismatch,
  NotStochastic,
  NotConverged,
  // learner
  EmptyCounts,
  PartitionMismatch,
  AllMissingColumn,
  EmptyFitSet,
  DegenerateSplit,
  EmptyTrainingSet,
  MissingFeature,
  InsufficientSamples,
  // cohort
  SchemaViolation,
  DuplicateStudentId,
  InvalidProfile,
  // io / cli
  ParseError,
  IoError,
  Usage,
};

constexpr std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorKind::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::InvalidNode: return "InvalidNode";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::CostResolutionExceeded: return "CostResolutionExceeded";
    case ErrorKind::ExcessCostPrecision: return "ExcessCostPrecision";
    case ErrorKind::InvalidRequest: return "InvalidRequest";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::NoFeasiblePath: return "NoFeasiblePath";
    case ErrorKind::EmptyPlan: return "EmptyPlan";
    case ErrorKind::MissingOutcome: return "MissingOutcome";
    case ErrorKind::UnknownEdge: return "UnknownEdge";
    case ErrorKind::InvalidMetric: return "InvalidMetric";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::NegativeCount: return "NegativeCount";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::StateMismatch: return "StateMismatch";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::EmptyCounts: return "EmptyCounts";
    case ErrorKind::PartitionMismatch: return "PartitionMismatch";
    case ErrorKind::AllMissingColumn: return "AllMissingColumn";
    case ErrorKind::EmptyFitSet: return "EmptyFitSet";
    case ErrorKind::DegenerateSplit: return "DegenerateSplit";
    case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::MissingFeature: return "MissingFeature";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::DuplicateStudentId: return "DuplicateStudentId";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

// Errors caused by malformed or invalid input (exit status 2 at the CLI).
// Everything else is a domain outcome on valid input (exit status 1).
constexpr bool is_input_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateNodeId:
    case ErrorKind::UnknownEndpoint:
    case ErrorKind::DuplicateEdge:
    case ErrorKind::SelfLoop:
    case ErrorKind::NonPositiveWeight:
    case ErrorKind::InvalidNode:
    case ErrorKind::ExcessCostPrecision:
    case ErrorKind::InvalidRequest:
    case ErrorKind::UnknownNode:
    case ErrorKind::UnknownEdge:
    case ErrorKind::InvalidMetric:
    case ErrorKind::InvalidConfig:
    case ErrorKind::NegativeCount:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::StateMismatch:
    case ErrorKind::NotStochastic:
    case ErrorKind::SchemaViolation:
    case ErrorKind::DuplicateStudentId:
    case ErrorKind::InvalidProfile:
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
    case ErrorKind::Usage:
      return true;
    default:
      return false;
  }
}

/// Exception carrying a typed kind plus optional structured context
/// (a cycle witness, the offending edge, a row/column pair, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::vector<std::string> context = {})
      : std::runtime_error(std::string(kind_name(kind)) + ": " + message),
        kind_(kind),
        detail_(message),
        context_(std::move(context)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::string>& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::vector<std::string> context_;
};

}  // namespace mcbsg
