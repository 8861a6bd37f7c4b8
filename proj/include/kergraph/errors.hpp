#pragma once

#include <stdexcept>
#include <string>

namespace kergraph {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// kernel construction
struct DegenerateDataError : Error { using Error::Error; };
struct NonFiniteError : Error { using Error::Error; };
struct NonPositiveKernelError : Error { using Error::Error; };

// solver
struct DimensionMismatchError : Error { using Error::Error; };
struct SvdFailureError : Error { using Error::Error; };
struct SingularSystemError : Error { using Error::Error; };

// clustering
struct EigenFailureError : Error { using Error::Error; };
struct NegativeInputError : Error { using Error::Error; };

// metrics
struct LengthMismatchError : Error { using Error::Error; };

// io / pipeline
struct ParseError : Error { using Error::Error; };
struct RaggedRowsError : Error { using Error::Error; };
struct MissingLabelColumnError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace kergraph
