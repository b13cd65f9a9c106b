#pragma once

#include <string>
#include <vector>

namespace groupoidgen {

/// Least-squares slope of log(residual) against log(scale).
struct SlopeFit {
    double slope = 0.0;
    bool at_floor = false;  // every residual under the roundoff floor; slope is meaningless
    std::vector<double> scales;
    std::vector<double> residuals;
};

/// floor_tol marks the roundoff regime: residuals that small are treated as
/// "exact to machine precision" rather than fitted.
SlopeFit fit_loglog_slope(const std::vector<double>& scales, const std::vector<double>& residuals,
                          double floor_tol = 1e-13);

enum class CheckStatus { Pass, Flag, Fail };

const char* to_string(CheckStatus s);

struct CheckRecord {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    std::string comparison;  // "<=" for residuals, ">=" for slopes
    CheckStatus status = CheckStatus::Pass;
    double runtime_seconds = 0.0;
    std::string note;
};

/// measured <= tolerance, pass/fail only.
CheckRecord residual_check(const std::string& name, double measured, double tolerance);

/// Slope against a target order. Fits within 0.5 of the target flag rather
/// than fail (4-point log-log fits are noisy); residuals wholly at the
/// machine floor pass outright.
CheckRecord slope_check(const std::string& name, const SlopeFit& fit, double target);

struct Report {
    std::vector<CheckRecord> records;

    void add(CheckRecord rec);
    bool all_passed() const;  // flags do not fail
    int exit_code() const { return all_passed() ? 0 : 1; }

    /// Deterministic pretty-printed JSON; the timestamp is the only
    /// run-dependent line.
    std::string to_json_string(const std::string& timestamp) const;
};

}  // namespace groupoidgen
