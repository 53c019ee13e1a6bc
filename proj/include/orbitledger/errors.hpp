#pragma once

#include <stdexcept>
#include <string>

namespace orbitledger {

// Protocol and simulation error types. Thrown on precondition violations;
// recoverable rejections (e.g. chain append) are reported as result values
// instead.

struct DuplicateIdentityError : std::invalid_argument {
    explicit DuplicateIdentityError(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroIdentityError : std::invalid_argument {
    explicit ZeroIdentityError(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidThresholdError : std::invalid_argument {
    explicit InvalidThresholdError(const std::string& what) : std::invalid_argument(what) {}
};

struct NotInSubsetError : std::invalid_argument {
    explicit NotInSubsetError(const std::string& what) : std::invalid_argument(what) {}
};

struct InsufficientContributionsError : std::invalid_argument {
    explicit InsufficientContributionsError(const std::string& what) : std::invalid_argument(what) {}
};

struct GroupSetupError : std::invalid_argument {
    explicit GroupSetupError(const std::string& what) : std::invalid_argument(what) {}
};

struct PoolFullError : std::runtime_error {
    explicit PoolFullError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyPoolError : std::runtime_error {
    explicit EmptyPoolError(const std::string& what) : std::runtime_error(what) {}
};

struct DegeneratePlaneError : std::invalid_argument {
    explicit DegeneratePlaneError(const std::string& what) : std::invalid_argument(what) {}
};

struct SinglePlaneError : std::invalid_argument {
    explicit SinglePlaneError(const std::string& what) : std::invalid_argument(what) {}
};

struct IndexOutOfRangeError : std::out_of_range {
    explicit IndexOutOfRangeError(const std::string& what) : std::out_of_range(what) {}
};

struct TooFewNodesError : std::invalid_argument {
    explicit TooFewNodesError(const std::string& what) : std::invalid_argument(what) {}
};

struct ConsensusFailedError : std::runtime_error {
    explicit ConsensusFailedError(const std::string& what) : std::runtime_error(what) {}
};

struct WindowOverrunError : std::runtime_error {
    explicit WindowOverrunError(const std::string& what) : std::runtime_error(what) {}
};

struct WireFormatError : std::runtime_error {
    explicit WireFormatError(const std::string& what) : std::runtime_error(what) {}
};

struct ChainIoError : std::runtime_error {
    explicit ChainIoError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace orbitledger
