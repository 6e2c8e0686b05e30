#pragma once

#include <stdexcept>
#include <string>

namespace cdc {

/// Invalid or structurally impossible configuration (layouts, generators, scenarios).
class config_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Reference to a component, workload or name that does not exist.
class lookup_error : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

/// Data that contradicts the layout it is evaluated against.
class integrity_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Precondition of an operation not met by the caller (e.g. objective of an infeasible placement).
class contract_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// A requested search could not produce any feasible answer.
class infeasible_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Result rows that cannot be matched one to one for a comparison.
class pairing_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace cdc
