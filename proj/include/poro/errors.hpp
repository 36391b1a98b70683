#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace poro {

// Error categories map 1:1 onto CLI exit codes:
//   input_error -> 2, resolution_error -> 3, resource_error -> 4,
//   verification_error -> 5.

class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed file content; carries the byte offset where parsing stopped.
class parse_error : public input_error {
public:
    parse_error(const std::string& msg, std::size_t byte_offset)
        : input_error(msg), byte_offset_(byte_offset) {}
    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// Requested scales finer than the raster can support.
class resolution_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rejection sampling ran out of attempts.
class sampling_error : public resource_error {
public:
    using resource_error::resource_error;
};

class verification_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace poro
