#pragma once

#include <string>
#include <vector>

namespace rham {

enum class CheckStatus { pass, fail, info };

struct CheckResult {
    std::string id;
    CheckStatus status;
    std::string detail;
};

/// Outcome of one verification pass over a named subject.
struct Report {
    std::string subject;
    std::vector<CheckResult> checks;

    void pass(std::string id, std::string detail = "") {
        checks.push_back({std::move(id), CheckStatus::pass, std::move(detail)});
    }
    void fail(std::string id, std::string detail = "") {
        checks.push_back({std::move(id), CheckStatus::fail, std::move(detail)});
    }
    void info(std::string id, std::string detail = "") {
        checks.push_back({std::move(id), CheckStatus::info, std::move(detail)});
    }
    void add(CheckStatus st, std::string id, std::string detail = "") {
        checks.push_back({std::move(id), st, std::move(detail)});
    }
    void append(const Report& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }

    bool all_pass() const {
        for (const auto& c : checks)
            if (c.status == CheckStatus::fail) return false;
        return true;
    }
};

}  // namespace rham
