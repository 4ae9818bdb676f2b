#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tetraverify/rational.hpp"

namespace tetraverify {

inline constexpr std::string_view kToolName = "tetraverify";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Status { Pass, Fail, Info };
std::string to_string(Status status);

struct Check {
    std::string name;
    Status status = Status::Info;
    nlohmann::json payload = nlohmann::json::object();
};

/// Machine-readable outcome of one CLI run. The aggregate is Fail iff any
/// non-info check failed.
class JsonReport {
public:
    JsonReport(std::string command, std::vector<std::string> argv, nlohmann::json config);

    void add(Check check) { checks_.push_back(std::move(check)); }
    void add(const std::vector<Check>& checks) { checks_.insert(checks_.end(), checks.begin(), checks.end()); }
    void set_summary(nlohmann::json summary) { summary_ = std::move(summary); }
    void set_wall_seconds(double seconds) { wall_seconds_ = seconds; }

    const std::vector<Check>& checks() const { return checks_; }
    Status aggregate() const;
    int exit_code() const { return aggregate() == Status::Fail ? 1 : 0; }
    std::size_t count(Status status) const;

    nlohmann::json to_json() const;

private:
    std::string command_;
    std::vector<std::string> argv_;
    nlohmann::json config_;
    nlohmann::json summary_ = nlohmann::json::object();
    std::vector<Check> checks_;
    double wall_seconds_ = 0.0;
};

/// Lossless JSON rendering of an exact value.
inline nlohmann::json to_json_value(const Rational& x) { return x.to_string(); }
inline nlohmann::json to_json_value(double x) { return x; }

}  // namespace tetraverify
