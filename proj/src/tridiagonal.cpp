#include "vdyn/tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "vdyn/errors.hpp"

namespace vdyn {

namespace {

double row_offdiag(const TridiagonalSystem& sys, std::size_t n) {
    const std::size_t last = sys.size() - 1;
    double sum = 0.0;
    if (n > 0) sum += std::abs(sys.sub[n]);
    if (n < last) sum += std::abs(sys.super[n]);
    return sum;
}

void require_shape(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    if (n == 0 || sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n) {
        throw ValidationError("tridiagonal", "sub, diag, super and rhs must share a nonzero length");
    }
}

}  // namespace

double TridiagonalSystem::dominance_margin() const {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < size(); ++n) {
        margin = std::min(margin, std::abs(diag[n]) - row_offdiag(*this, n));
    }
    return margin;
}

void TridiagonalSystem::require_strict_dominance() const {
    require_shape(*this);
    for (std::size_t n = 0; n < size(); ++n) {
        const double off = row_offdiag(*this, n);
        // Negated comparison so NaN coefficients are rejected too.
        if (!(std::abs(diag[n]) > off)) {
            std::ostringstream msg;
            msg << "|diag| = " << std::abs(diag[n]) << " <= sum of off-diagonals " << off;
            throw DominanceViolated(n, msg.str());
        }
    }
}

std::vector<double> TridiagonalSystem::multiply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i] * x[i];
        if (i > 0) acc += sub[i] * x[i - 1];
        if (i + 1 < n) acc += super[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    sys.require_strict_dominance();
    std::vector<double> x(sys.size());
    std::vector<double> scratch;
    solve_tridiagonal_into(sys, x, scratch);
    return x;
}

void solve_tridiagonal_into(const TridiagonalSystem& sys, std::span<double> x,
                            std::vector<double>& scratch) {
    const std::size_t n = sys.size();
    scratch.resize(n);
    // scratch holds the modified super-diagonal; x holds the modified rhs
    // until back substitution overwrites it.
    double pivot = sys.diag[0];
    scratch[0] = n > 1 ? sys.super[0] / pivot : 0.0;
    x[0] = sys.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.sub[i] * scratch[i - 1];
        scratch[i] = i + 1 < n ? sys.super[i] / pivot : 0.0;
        x[i] = (sys.rhs[i] - sys.sub[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= scratch[i] * x[i + 1];
    }
}

}  // namespace vdyn
