#pragma once

#include <stdexcept>
#include <string>

namespace oge {

// Malformed external input: graph files, manifests, configs.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values encountered during training or inference.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oge
