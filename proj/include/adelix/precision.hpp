#pragma once

namespace adelix {

/* Global truncation contract. Every ind-pro limit in the theory is realized
 * here as a finite window; operations that would need data outside the window
 * raise a precision error instead of guessing.
 */
struct PrecisionCtx {
    int padic_digits = 32;   // unit digits kept per p-adic number
    long t_lo = -32;         // Laurent exponent window [t_lo, t_hi)
    long t_hi = 32;
    double eps = 1e-10;      // archimedean comparison tolerance

    bool valid() const { return padic_digits >= 1 && t_lo < t_hi && eps > 0; }
};

}  // namespace adelix
