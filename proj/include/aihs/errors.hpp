// Exception types for the failure modes of each construction. Every class
// carries the diagnostic payload that makes the failure actionable (the
// offending singular value, the achievable budget, ...). The scenario runner
// catches Error and surfaces kind() in the report instead of crashing.

#pragma once

#include <stdexcept>
#include <string>

namespace aihs {

class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

struct InvalidSpec : Error {
    explicit InvalidSpec(const std::string& what) : Error("InvalidSpec", what) {}
};

struct SingularResolvent : Error {
    SingularResolvent(const std::string& what, double sigma)
        : Error("SingularResolvent", what), sigma_min(sigma) {}
    double sigma_min;
};

struct ScheduleExhausted : Error {
    explicit ScheduleExhausted(const std::string& what) : Error("ScheduleExhausted", what) {}
};

struct AllCandidatesBounded : Error {
    explicit AllCandidatesBounded(const std::string& what)
        : Error("AllCandidatesBounded", what) {}
};

struct FamilyTooShort : Error {
    explicit FamilyTooShort(const std::string& what) : Error("FamilyTooShort", what) {}
};

struct TooFewSelected : Error {
    explicit TooFewSelected(const std::string& what) : Error("TooFewSelected", what) {}
};

struct RankDeficient : Error {
    RankDeficient(const std::string& what, double sigma)
        : Error("RankDeficient", what), sigma_min(sigma) {}
    double sigma_min;
};

struct DefectMismatch : Error {
    DefectMismatch(const std::string& what, double res)
        : Error("DefectMismatch", what), residual(res) {}
    double residual;
};

struct BudgetInfeasible : Error {
    BudgetInfeasible(const std::string& what, double achievable)
        : Error("BudgetInfeasible", what), achievable_eps(achievable) {}
    double achievable_eps;
};

struct NoDefect : Error {
    explicit NoDefect(const std::string& what) : Error("NoDefect", what) {}
};

struct BranchUnsupported : Error {
    explicit BranchUnsupported(const std::string& what) : Error("BranchUnsupported", what) {}
};

struct HypothesisFailed : Error {
    explicit HypothesisFailed(const std::string& what) : Error("HypothesisFailed", what) {}
};

struct NotEigenpair : Error {
    NotEigenpair(const std::string& what, double res)
        : Error("NotEigenpair", what), residual(res) {}
    double residual;
};

struct ContourHitsSpectrum : Error {
    explicit ContourHitsSpectrum(const std::string& what)
        : Error("ContourHitsSpectrum", what) {}
};

struct QuadratureNotConverged : Error {
    QuadratureNotConverged(const std::string& what, double delta)
        : Error("QuadratureNotConverged", what), last_delta(delta) {}
    double last_delta;
};

struct ConfigInvalid : Error {
    explicit ConfigInvalid(const std::string& what) : Error("ConfigInvalid", what) {}
};

}  // namespace aihs
