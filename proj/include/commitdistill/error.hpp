#pragma once

#include <stdexcept>
#include <string>

namespace commitdistill {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Repository path missing or not a git work tree.
class RepoNotFound : public Error {
public:
    using Error::Error;
};

/// git exited nonzero; what() carries the captured stderr.
class GitError : public Error {
public:
    GitError(const std::string& what, int exit_code)
        : Error(what), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

class UnknownSha : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid arguments to an evaluation routine (empty samples, mismatched lengths, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

class InsufficientFixes : public Error {
public:
    InsufficientFixes(const std::string& what, std::size_t found)
        : Error(what), found_(found) {}
    std::size_t found() const noexcept { return found_; }

private:
    std::size_t found_;
};

}  // namespace commitdistill
