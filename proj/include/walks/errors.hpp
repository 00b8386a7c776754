#pragma once

#include <stdexcept>
#include <string>

namespace walks {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DisconnectedGraph : Error { using Error::Error; };
struct SelfLoop : Error { using Error::Error; };
struct InvalidNodeId : Error { using Error::Error; };
struct UnsatisfiableParams : Error { using Error::Error; };
struct InvalidK : Error { using Error::Error; };

struct RoundLimitExceeded : Error { using Error::Error; };
struct BandwidthViolation : Error { using Error::Error; };

struct StaleStore : Error { using Error::Error; };
struct NotCovering : Error { using Error::Error; };

struct BipartiteGraph : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };

struct TooLarge : Error { using Error::Error; };
struct TooMany : Error { using Error::Error; };
struct DegenerateExpected : Error { using Error::Error; };

struct ConfigError : Error { using Error::Error; };

}  // namespace walks
