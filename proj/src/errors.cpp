#include "pccdr/errors.hpp"

namespace pccdr {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kParse: return "ParseError";
        case ErrorKind::kValue: return "ValueError";
        case ErrorKind::kInvalidInput: return "InvalidInput";
        case ErrorKind::kIo: return "IoError";
        case ErrorKind::kDegenerateData: return "DegenerateData";
        case ErrorKind::kNumerical: return "NumericalError";
    }
    return "Error";
}

}  // namespace pccdr
