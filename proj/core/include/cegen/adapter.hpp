#pragma once

#include <stdexcept>
#include <string>

namespace cegen {

/// Connection or protocol failure on an external adapter. A repair sample hit
/// by this aborts and counts as invalid.
class AdapterError : public std::runtime_error {
public:
    explicit AdapterError(const std::string& msg) : std::runtime_error(msg) {}
};

class AdapterTimeout : public AdapterError {
public:
    explicit AdapterTimeout(const std::string& msg) : AdapterError(msg) {}
};

/// The remote language model returned probabilities that are negative or do
/// not sum to one.
class MalformedDistribution : public AdapterError {
public:
    explicit MalformedDistribution(const std::string& msg) : AdapterError(msg) {}
};

}  // namespace cegen
