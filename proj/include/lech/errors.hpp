#ifndef LECH_ERRORS_HPP
#define LECH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lech {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Mixed rings, ill-formed presentations, membership violations.
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& what) : Error(what) {}
};

// Bad argument values (q not a power of p, wrong sop size, ...).
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(what) {}
};

// A configured resource cap was exceeded.  Callers that can salvage a
// partial result (e.g. a partial length table) inspect `partial`.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what, std::string partial = {})
        : Error(what), partial(std::move(partial)) {}
    std::string partial;
};

// A randomized search ran out of tries.
class SearchError : public Error {
public:
    explicit SearchError(const std::string& what) : Error(what) {}
};

} // namespace lech

#endif
