#pragma once

#include "pccdr/matrix.hpp"

namespace pccdr {

/// Column-wise z-scoring with population standard deviation. Zero-variance
/// columns become all zeros. Labels are passed through. Requires N >= 2.
DataMatrix standardize(const DataMatrix& data);

}  // namespace pccdr
