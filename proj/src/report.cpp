#include "tetraverify/report.hpp"

namespace tetraverify {

std::string to_string(Status status) {
    switch (status) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Info: return "info";
    }
    return "unknown";
}

JsonReport::JsonReport(std::string command, std::vector<std::string> argv, nlohmann::json config)
    : command_(std::move(command)), argv_(std::move(argv)), config_(std::move(config)) {}

Status JsonReport::aggregate() const {
    for (const Check& c : checks_) {
        if (c.status == Status::Fail) return Status::Fail;
    }
    return Status::Pass;
}

std::size_t JsonReport::count(Status status) const {
    std::size_t n = 0;
    for (const Check& c : checks_) n += c.status == status ? 1 : 0;
    return n;
}

nlohmann::json JsonReport::to_json() const {
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& c : checks_) {
        checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"payload", c.payload}});
    }
    nlohmann::json out;
    out["tool"] = kToolName;
    out["version"] = kToolVersion;
    out["command"] = command_;
    out["argv"] = argv_;
    out["config"] = config_;
    out["summary"] = summary_;
    out["counts"] = {{"pass", count(Status::Pass)}, {"fail", count(Status::Fail)}, {"info", count(Status::Info)}};
    out["checks"] = std::move(checks);
    out["status"] = to_string(aggregate());
    out["wall_time_s"] = wall_seconds_;
    return out;
}

}  // namespace tetraverify
