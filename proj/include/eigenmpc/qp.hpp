#pragma once

#include <cstdint>
#include <vector>

#include "eigenmpc/types.hpp"

namespace eigenmpc {

/// min 1/2 x^T H x + g^T x  s.t.  lb <= x <= ub, H symmetric positive
/// (semi-)definite. Primal active-set method; bound feasibility is exact by
/// construction.
struct BoxQpResult {
    Vec x;
    std::vector<std::int8_t> active;  // -1 at lb, +1 at ub, 0 free
    int iterations = 0;
    bool converged = false;
};

BoxQpResult solve_box_qp(const Mat& H, const Vec& g, const Vec& lb, const Vec& ub,
                         const std::vector<std::int8_t>* warm_active = nullptr);

}  // namespace eigenmpc
