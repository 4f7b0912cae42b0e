#pragma once

#include <stdexcept>
#include <string>

namespace fcaroute {

// Malformed or inconsistent input data (files, configs, dangling ids).
// The CLI maps this family to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// File parse failure carrying file/line context.
class ParseError : public DataError {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : DataError(file + ":" + std::to_string(line) + ": " + what),
          file_(file), line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

}  // namespace fcaroute
