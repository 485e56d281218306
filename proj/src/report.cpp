#include "aihs/report.hpp"

#include <cstdio>

namespace aihs {

std::string format_decimal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void VerificationReport::add_residual(const std::string& name, double value, double tolerance) {
    residuals_[name] = ResidualEntry{value, tolerance, value <= tolerance};
}

void VerificationReport::set_hypothesis(const std::string& name, const std::string& status) {
    hypothesis_[name] = status;
}

void VerificationReport::set_object(const std::string& key, nlohmann::json value) {
    objects_[key] = std::move(value);
}

void VerificationReport::set_timing(const std::string& stage, double ms) {
    timings_ms_[stage] = ms;
}

void VerificationReport::note_error(const std::string& kind, const std::string& what) {
    error_kind_ = kind;
    error_what_ = what;
}

bool VerificationReport::pass() const {
    if (!error_kind_.empty()) return false;
    for (const auto& [name, r] : residuals_)
        if (!r.pass) return false;
    return true;
}

const ResidualEntry* VerificationReport::find_residual(const std::string& name) const {
    const auto it = residuals_.find(name);
    return it == residuals_.end() ? nullptr : &it->second;
}

nlohmann::json VerificationReport::number_list(const std::vector<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : v) arr.push_back(format_decimal(x));
    return arr;
}

nlohmann::json VerificationReport::complex_str(Complex z) {
    return format_decimal(z.real()) + (z.imag() < 0 ? "" : "+") + format_decimal(z.imag()) + "i";
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario_;
    j["pass"] = pass();
    nlohmann::json res = nlohmann::json::object();
    for (const auto& [name, r] : residuals_) {
        res[name] = {{"value", format_decimal(r.value)},
                     {"tolerance", format_decimal(r.tolerance)},
                     {"pass", r.pass}};
    }
    j["residuals"] = res;
    j["objects"] = objects_;
    j["hypothesis_flags"] = hypothesis_;
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [stage, ms] : timings_ms_) t[stage] = format_decimal(ms);
    j["timings_ms"] = t;
    if (!error_kind_.empty()) j["error"] = {{"kind", error_kind_}, {"what", error_what_}};
    return j;
}

std::string VerificationReport::to_string() const { return to_json().dump(2) + "\n"; }

}  // namespace aihs
