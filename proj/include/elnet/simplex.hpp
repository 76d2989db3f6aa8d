#ifndef ELNET_SIMPLEX_HPP
#define ELNET_SIMPLEX_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace elnet {

/// Dense bounded-variable simplex for the tiny homogeneous feasibility
/// systems of the stratification solver:
///
///     maximize c.x   subject to  A x = 0,  0 <= x <= hi.
///
/// x = 0 is always feasible, so the initial basis is a set of artificial
/// variables fixed at [0, 0]. Bland's rule on entering and leaving columns
/// guarantees termination under degeneracy.
class BoundedSimplex {
public:
    BoundedSimplex(std::vector<std::vector<double>> rows, std::vector<double> hi)
        : m_(rows.size()), n_(hi.size()), hi_(std::move(hi)) {
        for (const auto& r : rows)
            if (r.size() != static_cast<std::size_t>(n_))
                throw std::invalid_argument("row size mismatch");
        // columns: n structural + m artificial (bounds [0,0])
        T_.assign(m_, std::vector<double>(n_ + m_, 0.0));
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) T_[i][j] = rows[i][j];
            T_[i][n_ + i] = 1.0;
        }
    }

    /// Maximize c.x; returns the optimal structural vector.
    std::vector<double> maximize(const std::vector<double>& c, double* objective = nullptr) {
        if (c.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("cost size");
        std::vector<double> cost(n_ + m_, 0.0);
        for (int j = 0; j < n_; ++j) cost[j] = c[j];

        std::vector<std::vector<double>> T = T_;
        std::vector<double> xb(m_, 0.0);   // basic values
        std::vector<int> basis(m_);
        std::vector<int> status(n_ + m_, kAtLower);  // nonbasic at lower unless basic
        for (int i = 0; i < m_; ++i) {
            basis[i] = n_ + i;
            status[n_ + i] = kBasic;
        }

        const int max_pivots = 2000 + 50 * (n_ + m_) * (m_ + 1);
        for (int iter = 0; iter < max_pivots; ++iter) {
            // reduced costs via duals on the current tableau; artificial
            // columns are fixed at zero width and never enter
            int enter = -1;
            double dir = 0.0;
            for (int j = 0; j < n_; ++j) {
                if (status[j] == kBasic) continue;
                double zj = cost[j];
                for (int i = 0; i < m_; ++i)
                    if (cost[basis[i]] != 0.0) zj -= cost[basis[i]] * T[i][j];
                if (status[j] == kAtLower && zj > kPivotTol) {
                    enter = j;
                    dir = 1.0;
                    break;  // Bland: first eligible index
                }
                if (status[j] == kAtUpper && zj < -kPivotTol) {
                    enter = j;
                    dir = -1.0;
                    break;
                }
            }
            if (enter < 0) break;  // optimal

            // ratio test: entering moves by t*dir from its bound
            double t_max = upper_of(enter) - lower_of(enter);
            int leave = -1;
            int leave_to = kAtLower;
            for (int i = 0; i < m_; ++i) {
                const double a = dir * T[i][enter];
                double t;
                int to;
                if (a > kPivotTol) {  // basic decreases toward its lower bound
                    t = (xb[i] - lower_of(basis[i])) / a;
                    to = kAtLower;
                } else if (a < -kPivotTol) {  // basic increases toward its upper bound
                    t = (upper_of(basis[i]) - xb[i]) / (-a);
                    to = kAtUpper;
                } else {
                    continue;
                }
                if (t < 0.0) t = 0.0;
                if (t < t_max - 1e-15) {
                    t_max = t;
                    leave = i;
                    leave_to = to;
                } else if (leave >= 0 && t <= t_max + 1e-15 && basis[i] < basis[leave]) {
                    leave = i;  // Bland tie-break on the lowest basic index
                    leave_to = to;
                }
            }

            // apply the step to basic values
            for (int i = 0; i < m_; ++i) xb[i] -= dir * T[i][enter] * t_max;

            if (leave < 0) {
                // bound-to-bound flip
                status[enter] = (status[enter] == kAtLower) ? kAtUpper : kAtLower;
                continue;
            }

            // pivot: 'enter' becomes basic in row 'leave'
            const double piv = T[leave][enter];
            if (std::abs(piv) <= kPivotTol) throw std::logic_error("simplex pivot too small");
            const double enter_val =
                (status[enter] == kAtLower ? lower_of(enter) : upper_of(enter)) + dir * t_max;
            for (int j = 0; j < n_ + m_; ++j) T[leave][j] /= piv;
            for (int i = 0; i < m_; ++i) {
                if (i == leave) continue;
                const double f = T[i][enter];
                if (f == 0.0) continue;
                for (int j = 0; j < n_ + m_; ++j) T[i][j] -= f * T[leave][j];
            }
            status[basis[leave]] = leave_to;
            status[enter] = kBasic;
            basis[leave] = enter;
            xb[leave] = enter_val;
        }

        std::vector<double> x(n_, 0.0);
        for (int j = 0; j < n_; ++j)
            x[j] = (status[j] == kAtUpper) ? hi_[j] : 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis[i] < n_) x[basis[i]] = xb[i];
        if (objective) {
            double obj = 0.0;
            for (int j = 0; j < n_; ++j) obj += c[j] * x[j];
            *objective = obj;
        }
        return x;
    }

private:
    static constexpr int kBasic = 0;
    static constexpr int kAtLower = 1;
    static constexpr int kAtUpper = 2;
    static constexpr double kPivotTol = 1e-9;

    double lower_of(int /*j*/) const { return 0.0; }
    double upper_of(int j) const { return j < n_ ? hi_[j] : 0.0; }

    int m_;
    int n_;
    std::vector<double> hi_;
    std::vector<std::vector<double>> T_;
};

}  // namespace elnet

#endif
