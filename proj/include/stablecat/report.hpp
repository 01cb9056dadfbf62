#pragma once

#include "stablecat/category.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace stablecat {

using json = nlohmann::json;

enum class Status { pass, fail, inconclusive };

const char *to_string(Status s);

/// One verified statement.  A fail carries a counterexample; an inconclusive result names the exhausted budget.
struct CheckReport
{
    std::string id;
    Status status = Status::pass;
    std::string detail;
    json witness = json::object();
    /// Number of instances examined.
    std::uint64_t instances = 0;

    static CheckReport pass(std::string id, std::string detail = {}, std::uint64_t instances = 0);
    static CheckReport fail(std::string id, std::string detail, json witness = json::object());
    static CheckReport inconclusive(std::string id, std::string detail);
};

json to_json(const Matrix &m);
json to_json(const Morphism &f);
json to_json(const CheckReport &r);
json to_json(const std::vector<CheckReport> &rs);

/// Worst status: fail beats inconclusive beats pass.
Status overall(const std::vector<CheckReport> &rs);

/// Tally of instances checked under one id, turned into a single report.
class CheckTally
{
    std::string id_;
    std::uint64_t instances_ = 0;
    std::optional<CheckReport> failure_;
    std::optional<CheckReport> inconclusive_;

    public:
    explicit CheckTally(std::string id) : id_(std::move(id)) {}
    /// Records one instance; keeps the first failure and the first inconclusive result.
    void pass() { ++instances_; }
    void fail(std::string detail, json witness = json::object());
    void inconclusive(std::string detail);
    bool failed() const { return failure_.has_value(); }
    CheckReport report(std::string pass_detail = {}) const;
};

}
