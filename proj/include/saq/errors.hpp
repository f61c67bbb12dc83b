#ifndef SAQ_ERRORS_HPP
#define SAQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace saq {

// Malformed text input (polynomial/formula/SLP grammars, CLI arguments).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A documented operation precondition does not hold.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// A guarded computation exceeded its resource cap (term/clause/grid limits).
class ResourceCapError : public std::runtime_error {
public:
    explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace saq

#endif
