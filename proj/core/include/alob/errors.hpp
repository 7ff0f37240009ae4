#pragma once

#include <stdexcept>
#include <string>

// Exception taxonomy shared by every module. Each condition that callers are
// expected to handle separately gets its own type; everything derives from
// alob::Error so a CLI can map "any domain failure" to a single exit path.

namespace alob {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- order book ----
struct EmptySide : Error {
    using Error::Error;
};
struct ThinSide : Error {
    using Error::Error;
};
struct CrossingOrder : Error {
    using Error::Error;
};
struct InsufficientLiquidity : Error {
    using Error::Error;
};

// ---- statistics / estimation ----
struct SeriesTooShort : Error {
    using Error::Error;
};
struct DegenerateSeries : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};
struct InvalidMemory : Error {
    using Error::Error;
};
struct InsufficientHistory : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct DegenerateBins : Error {
    using Error::Error;
};

// ---- configuration / io ----
struct ConfigInvalid : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct SchemaError : Error {
    using Error::Error;
};
struct UnorderedTimestamps : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

// ---- simulation ----
struct NonStationaryWarmup : Error {
    using Error::Error;
};

}  // namespace alob
