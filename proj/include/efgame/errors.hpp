#pragma once

#include <stdexcept>
#include <string>

namespace efg {

// Every failure the library raises derives from Error so callers can catch
// the whole family in one place (the CLI maps it onto exit codes).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at offset " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class SortMismatch : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// f_nu would send a B-element to a sequence that deviates from its base
/// coset infinitely often, which is not an element of the model.
class IllegalImage : public Error {
public:
    using Error::Error;
};

/// A symbolic decision procedure met a rule combination outside the fragment
/// it can decide exactly.
class Undecided : public Error {
public:
    using Error::Error;
};

class IllegalAisMove : public Error {
public:
    using Error::Error;
};

class IsoStuck : public Error {
public:
    using Error::Error;
};

class InconsistentState : public Error {
public:
    using Error::Error;
};

}  // namespace efg
