#include "stablecat/report.hpp"

namespace stablecat {

const char *to_string(Status s)
{
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    }
    return "?";
}

CheckReport CheckReport::pass(std::string id, std::string detail, std::uint64_t instances)
{
    return {std::move(id), Status::pass, std::move(detail), json::object(), instances};
}

CheckReport CheckReport::fail(std::string id, std::string detail, json witness)
{
    return {std::move(id), Status::fail, std::move(detail), std::move(witness), 0};
}

CheckReport CheckReport::inconclusive(std::string id, std::string detail)
{
    return {std::move(id), Status::inconclusive, std::move(detail), json::object(), 0};
}

json to_json(const Matrix &m) { return m.to_nested(); }

json to_json(const Morphism &f)
{
    return {{"source", f.source.name().empty() ? json(f.source.dim()) : json(f.source.name())},
            {"target", f.target.name().empty() ? json(f.target.dim()) : json(f.target.name())},
            {"matrix", to_json(f.matrix)}};
}

json to_json(const CheckReport &r)
{
    json j = {{"id", r.id}, {"status", to_string(r.status)}, {"instances", r.instances}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    if (!r.witness.empty()) j["witness"] = r.witness;
    return j;
}

json to_json(const std::vector<CheckReport> &rs)
{
    json a = json::array();
    for (const auto &r : rs) a.push_back(to_json(r));
    return a;
}

Status overall(const std::vector<CheckReport> &rs)
{
    Status s = Status::pass;
    for (const auto &r : rs) {
        if (r.status == Status::fail) return Status::fail;
        if (r.status == Status::inconclusive) s = Status::inconclusive;
    }
    return s;
}

void CheckTally::fail(std::string detail, json witness)
{
    ++instances_;
    if (!failure_) failure_ = CheckReport::fail(id_, std::move(detail), std::move(witness));
}

void CheckTally::inconclusive(std::string detail)
{
    ++instances_;
    if (!inconclusive_) inconclusive_ = CheckReport::inconclusive(id_, std::move(detail));
}

CheckReport CheckTally::report(std::string pass_detail) const
{
    CheckReport r = failure_ ? *failure_ : inconclusive_ ? *inconclusive_ : CheckReport::pass(id_, std::move(pass_detail));
    r.instances = instances_;
    return r;
}

}
