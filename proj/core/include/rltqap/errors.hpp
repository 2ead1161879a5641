#pragma once

#include <stdexcept>
#include <string>

namespace rltqap {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// qap-model
struct TokenCountMismatch : Error { using Error::Error; };
struct NonNumericToken : Error { using Error::Error; };
struct NegativeEntry : Error { using Error::Error; };
struct NTooSmall : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InstanceTooLarge : Error { using Error::Error; };
struct InvalidPermutation : Error { using Error::Error; };

// assignment
struct NonFiniteEntry : Error { using Error::Error; };
struct PotentialMismatch : Error { using Error::Error; };

// rlt-tensors
struct MemoryBudgetExceeded : Error { using Error::Error; };
struct InvalidTuple : Error { using Error::Error; };
struct LevelUnavailable : Error { using Error::Error; };
struct NegativeSourceCoefficient : Error { using Error::Error; };
struct MissingComplementary : Error { using Error::Error; };

// dist-runtime
struct TooManyWorkers : Error { using Error::Error; };
struct BadMagic : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };
struct TruncatedPayload : Error { using Error::Error; };
struct TupleOutOfRange : Error { using Error::Error; };
struct PeerDisconnected : Error { using Error::Error; };
struct IterationMismatch : Error { using Error::Error; };
struct PhaseDesync : Error { using Error::Error; };
struct WorkerFailure : Error { using Error::Error; };

}  // namespace rltqap
