#pragma once

#include <stdexcept>
#include <string>

namespace mahlerlab {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};
struct BadDimension : Error {
    using Error::Error;
};
struct DegenerateInput : Error {
    using Error::Error;
};
struct OriginNotInterior : Error {
    using Error::Error;
};
struct NotCentered : Error {
    using Error::Error;
};
struct OutOfDomain : Error {
    using Error::Error;
};
struct NotCritical : Error {
    using Error::Error;
};
struct ChartViolation : Error {
    using Error::Error;
};
struct DegenerateImage : Error {
    using Error::Error;
};
struct BadParams : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};

} // namespace mahlerlab
