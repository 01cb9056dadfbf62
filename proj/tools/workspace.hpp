#pragma once

#include "stablecat/verifier.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stablecat::cli {

struct NamedBackend
{
    std::string name;
    std::string algebra;
    BackendPtr backend;
};

struct NamedSubcategory
{
    std::string name;
    std::string algebra;
    SubcategorySpec spec;
};

struct NamedTriple
{
    std::string name;
    std::string backend;
    TriplePtr triple;
};

/// A validated workspace: every name resolves and every declared object passed its validator.
struct Workspace
{
    std::string source;
    Field field{2};
    std::vector<std::pair<std::string, AlgebraPtr>> algebras;
    std::vector<Module> modules;
    std::vector<std::string> module_algebra;
    std::vector<NamedBackend> backends;
    std::vector<NamedSubcategory> subcategories;
    std::vector<NamedTriple> triples;
    /// (small, large) triple names.
    std::vector<std::pair<std::string, std::string>> chains;
    VerifyBudget budget;

    const Module &module(const std::string &name) const;
    const NamedBackend &backend(const std::string &name) const;
    const NamedTriple &triple(const std::string &name) const;
    /// Declared modules over the given algebra, in declaration order.
    std::vector<Module> modules_of(const AlgebraPtr &a) const;
    TheoryInput theory() const;
};

struct LoadOptions
{
    /// Highest priority; then the file's "seed"; then the environment default; then 1.
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> environment_seed;
    /// Overrides the enumeration and search limits.
    std::optional<std::uint64_t> budget;
};

/// Throws workspace_error with line and column on a parse error, or naming the first invalid entity.
Workspace load_workspace(const std::string &path, const LoadOptions &opts = {});
Workspace parse_workspace(const std::string &text, const std::string &source, const LoadOptions &opts = {});

/// Name of a declared module isomorphic to m in cat, "0" for a zero object, else the summands joined by " + ".
std::string iso_class(const Workspace &ws, const QuotientCategory &cat, const Module &m);

}
