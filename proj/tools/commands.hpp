#pragma once

#include "workspace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stablecat::cli {

const std::vector<std::string> &command_names();

struct CommandArgs
{
    std::string command;
    std::string triple;
    std::string backend;
    std::string object;
    std::string direction = "S";
    std::string source, target;
    std::string source2, target2;
    std::size_t basis = 0;
    std::size_t basis2 = 0;
};

struct CommandResult
{
    Status status = Status::pass;
    json report;
    std::string summary;
};

/// Throws workspace_error or contract_error on a usage problem.
CommandResult run_command(const Workspace &ws, const CommandArgs &args);

int exit_code(Status s);

}
