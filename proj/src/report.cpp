#include "groupoidgen/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace groupoidgen {

SlopeFit fit_loglog_slope(const std::vector<double>& scales, const std::vector<double>& residuals, double floor_tol) {
    if (scales.size() != residuals.size() || scales.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need matching lists with at least two points");
    SlopeFit fit;
    fit.scales = scales;
    fit.residuals = residuals;
    fit.at_floor = std::all_of(residuals.begin(), residuals.end(), [&](double r) { return r <= floor_tol; });
    if (fit.at_floor) return fit;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(scales.size());
    for (std::size_t k = 0; k < scales.size(); ++k) {
        double lx = std::log(scales[k]);
        double ly = std::log(std::max(residuals[k], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Flag: return "flag";
        case CheckStatus::Fail: return "fail";
    }
    return "?";
}

CheckRecord residual_check(const std::string& name, double measured, double tolerance) {
    CheckRecord rec;
    rec.name = name;
    rec.measured = measured;
    rec.threshold = tolerance;
    rec.comparison = "<=";
    rec.status = measured <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    return rec;
}

CheckRecord slope_check(const std::string& name, const SlopeFit& fit, double target) {
    CheckRecord rec;
    rec.name = name;
    rec.threshold = target;
    rec.comparison = ">=";
    if (fit.at_floor) {
        rec.measured = target;
        rec.status = CheckStatus::Pass;
        rec.note = "all residuals at machine floor; decay stronger than required";
        return rec;
    }
    rec.measured = fit.slope;
    if (fit.slope >= target)
        rec.status = CheckStatus::Pass;
    else if (fit.slope >= target - 0.5)
        rec.status = CheckStatus::Flag;
    else
        rec.status = CheckStatus::Fail;
    return rec;
}

void Report::add(CheckRecord rec) { records.push_back(std::move(rec)); }

bool Report::all_passed() const {
    return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.status != CheckStatus::Fail; });
}

std::string Report::to_json_string(const std::string& timestamp) const {
    nlohmann::ordered_json j;
    j["timestamp"] = timestamp;
    j["all_passed"] = all_passed();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& rec : records) {
        nlohmann::ordered_json r;
        r["name"] = rec.name;
        r["measured"] = rec.measured;
        r["threshold"] = rec.threshold;
        r["comparison"] = rec.comparison;
        r["status"] = to_string(rec.status);
        r["runtime_seconds"] = rec.runtime_seconds;
        if (!rec.note.empty()) r["note"] = rec.note;
        j["checks"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

}  // namespace groupoidgen
