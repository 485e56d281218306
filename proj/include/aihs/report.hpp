// Machine-readable verification reports. Every numeric quantity is emitted
// as a %.17g decimal string so reports round-trip byte-identically; each
// named residual carries its tolerance and pass flag, and the report passes
// iff every residual does.

#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "aihs/types.hpp"

namespace aihs {

std::string format_decimal(double v);

struct ResidualEntry {
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

class VerificationReport {
  public:
    explicit VerificationReport(std::string scenario) : scenario_(std::move(scenario)) {}

    void add_residual(const std::string& name, double value, double tolerance);
    void set_hypothesis(const std::string& name, const std::string& status);
    void set_object(const std::string& key, nlohmann::json value);
    void set_timing(const std::string& stage, double ms);
    void note_error(const std::string& kind, const std::string& what);

    bool pass() const;
    const std::string& error_kind() const { return error_kind_; }
    const std::map<std::string, ResidualEntry>& residuals() const { return residuals_; }
    const ResidualEntry* find_residual(const std::string& name) const;

    nlohmann::json to_json() const;
    std::string to_string() const;  // pretty JSON, 2-space indent

    // helpers for numeric payloads inside `objects`
    static nlohmann::json number(double v) { return format_decimal(v); }
    static nlohmann::json number_list(const std::vector<double>& v);
    static nlohmann::json complex_str(Complex z);

  private:
    std::string scenario_;
    std::map<std::string, ResidualEntry> residuals_;
    std::map<std::string, std::string> hypothesis_;
    nlohmann::json objects_ = nlohmann::json::object();
    std::map<std::string, double> timings_ms_;
    std::string error_kind_;
    std::string error_what_;
};

}  // namespace aihs
