#pragma once
#include <stdexcept>
#include <string>

namespace pq {

// Failure of a geometric construction or numeric routine. Messages start
// with a stable reason phrase ("degenerate circle", "coincident", ...) so
// callers can match on it.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

} // namespace pq
