#pragma once

#include <stdexcept>
#include <string>

namespace ratekit {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Signal construction / validation.
struct NonFiniteValue : Error { using Error::Error; };
struct IntervalNotPositive : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };

// Ingestion.
struct MalformedRow : Error { using Error::Error; };
struct NonMonotonicTime : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct GapTooSparse : Error { using Error::Error; };
struct SpecInvalid : Error { using Error::Error; };

// Resampling.
struct ResultTooShort : Error { using Error::Error; };
struct TooShortForWindow : Error { using Error::Error; };
struct TooFewKnots : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// Metrics.
struct ZeroNormOriginal : Error { using Error::Error; };
struct ZeroMeanOriginal : Error { using Error::Error; };

// Optimization / configuration.
struct NoFeasibleRate : Error { using Error::Error; };
struct BadConfig : Error { using Error::Error; };

}  // namespace ratekit
