#pragma once

#include <stdexcept>
#include <string>

namespace gwcp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A group weight q_k / p_k cannot be formed because the estimated p_k is zero.
class UndefinedWeight : public Error {
public:
    explicit UndefinedWeight(const std::string& what) : Error(what) {}
};

/// The closed form of a coverage bound was requested outside its hypothesis.
class HypothesisNotMet : public Error {
public:
    explicit HypothesisNotMet(const std::string& what) : Error(what) {}
};

}  // namespace gwcp
