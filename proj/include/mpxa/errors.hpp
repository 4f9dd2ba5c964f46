#pragma once

#include <stdexcept>
#include <string>

namespace mpxa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input data (malformed mesh files, bad parameters, dimension mismatches).
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

/// The square local system of a vertex could not be factorized (pivot below
/// threshold). The caller may fall back to the constrained-minimization path.
class SingularLocalSystem : public Error {
public:
    SingularLocalSystem(int vertex, const std::string& msg)
        : Error("singular local system at vertex " + std::to_string(vertex) + ": " + msg),
          vertex(vertex) {}
    int vertex;
};

/// The KKT system of a vertex is inconsistent after redundant constraint rows
/// were removed.
class RankDeficientKKT : public Error {
public:
    RankDeficientKKT(int vertex, const std::string& msg)
        : Error("rank-deficient KKT system at vertex " + std::to_string(vertex) + ": " + msg),
          vertex(vertex) {}
    int vertex;
};

/// A global sparse factorization failed.
class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& msg) : Error(msg) {}
};

} // namespace mpxa
