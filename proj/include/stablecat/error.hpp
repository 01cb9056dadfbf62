#pragma once

#include <stdexcept>
#include <string>

namespace stablecat {

struct error : std::runtime_error
{
    explicit error(const std::string &message) : std::runtime_error(message) { }
};

/// A caller broke an operation's precondition (dimension mismatch, wrong algebra, ...).
struct contract_error : error
{
    explicit contract_error(const std::string &message) : error(message) { }
};

/// A search ran out of budget before reaching a verdict.
struct inconclusive_error : error
{
    explicit inconclusive_error(const std::string &message) : error(message) { }
};

/// A construction that the theory guarantees failed; indicates a bug or corrupted input.
struct consistency_error : error
{
    explicit consistency_error(const std::string &message) : error(message) { }
};

struct workspace_error : error
{
    explicit workspace_error(const std::string &message) : error(message) { }
};

}
