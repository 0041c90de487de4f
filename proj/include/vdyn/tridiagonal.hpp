// Tridiagonal systems and the Thomas algorithm.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vdyn {

/// Row n reads sub[n] x[n-1] + diag[n] x[n] + super[n] x[n+1] = rhs[n].
/// sub[0] and super[size-1] are ignored.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    TridiagonalSystem() = default;
    explicit TridiagonalSystem(std::size_t n) : sub(n, 0.0), diag(n, 0.0), super(n, 0.0), rhs(n, 0.0) {}

    std::size_t size() const noexcept { return diag.size(); }

    /// min_n |diag[n]| - |sub[n]| - |super[n]| (only the couplings that exist).
    double dominance_margin() const;

    /// Throws DominanceViolated on the first row without strict dominance.
    void require_strict_dominance() const;

    /// y = A x, for residual checks.
    std::vector<double> multiply(std::span<const double> x) const;
};

/// Thomas algorithm without pivoting. Checks strict diagonal dominance first.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys);

/// Allocation-free variant for time loops; `scratch` is resized as needed.
/// Does not re-check dominance.
void solve_tridiagonal_into(const TridiagonalSystem& sys, std::span<double> x,
                            std::vector<double>& scratch);

}  // namespace vdyn
