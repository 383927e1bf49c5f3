#include "eigenmpc/qp.hpp"

#include <cmath>

namespace eigenmpc {

BoxQpResult solve_box_qp(const Mat& H, const Vec& g, const Vec& lb, const Vec& ub,
                         const std::vector<std::int8_t>* warm_active) {
    const int n = static_cast<int>(g.size());
    if ((lb.array() > ub.array()).any()) throw ConfigError("box QP requires lb <= ub");

    BoxQpResult res;
    res.active.assign(n, 0);
    if (warm_active && static_cast<int>(warm_active->size()) == n) res.active = *warm_active;

    Vec x = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (res.active[i] == -1)
            x[i] = lb[i];
        else if (res.active[i] == +1)
            x[i] = ub[i];
        else
            x[i] = std::clamp(0.0, lb[i], ub[i]);
    }

    const double step_tol = 1e-12;
    const double mult_tol = 1e-10 * (1.0 + g.cwiseAbs().maxCoeff());
    const int max_iters = 10 * n + 20;

    for (res.iterations = 0; res.iterations < max_iters; ++res.iterations) {
        const Vec grad = H * x + g;

        std::vector<int> free_idx;
        free_idx.reserve(n);
        for (int i = 0; i < n; ++i)
            if (res.active[i] == 0) free_idx.push_back(i);

        Vec d = Vec::Zero(n);
        if (!free_idx.empty()) {
            const int nf = static_cast<int>(free_idx.size());
            Mat hff(nf, nf);
            Vec gf(nf);
            for (int a = 0; a < nf; ++a) {
                gf[a] = grad[free_idx[a]];
                for (int b = 0; b < nf; ++b) hff(a, b) = H(free_idx[a], free_idx[b]);
            }
            hff.diagonal().array() += 1e-12 * (1.0 + hff.trace() / nf);
            const Vec df = hff.ldlt().solve(-gf);
            for (int a = 0; a < nf; ++a) d[free_idx[a]] = df[a];
        }

        if (d.cwiseAbs().maxCoeff() <= step_tol * (1.0 + x.cwiseAbs().maxCoeff())) {
            // Subspace minimizer; check bound multipliers and release the worst.
            int worst = -1;
            double worst_viol = mult_tol;
            for (int i = 0; i < n; ++i) {
                double viol = 0.0;
                if (res.active[i] == -1) viol = -grad[i];  // need grad >= 0 at lb
                if (res.active[i] == +1) viol = grad[i];   // need grad <= 0 at ub
                if (viol > worst_viol) {
                    worst_viol = viol;
                    worst = i;
                }
            }
            if (worst < 0) {
                res.converged = true;
                break;
            }
            res.active[worst] = 0;
            continue;
        }

        // Ratio test toward the subspace minimizer.
        double alpha = 1.0;
        int blocking = -1;
        std::int8_t block_side = 0;
        for (int i : free_idx) {
            if (d[i] > 0.0 && x[i] + d[i] > ub[i]) {
                const double a = (ub[i] - x[i]) / d[i];
                if (a < alpha) {
                    alpha = a;
                    blocking = i;
                    block_side = +1;
                }
            } else if (d[i] < 0.0 && x[i] + d[i] < lb[i]) {
                const double a = (lb[i] - x[i]) / d[i];
                if (a < alpha) {
                    alpha = a;
                    blocking = i;
                    block_side = -1;
                }
            }
        }
        x += alpha * d;
        if (blocking >= 0) {
            res.active[blocking] = block_side;
            x[blocking] = block_side > 0 ? ub[blocking] : lb[blocking];
        }
    }

    res.x = x;
    return res;
}

}  // namespace eigenmpc
