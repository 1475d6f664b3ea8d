// Both sides of the explicit formula for zeta and two Dirichlet L-functions,
// with a bump test function centred at 2.5.
#include <zerosum/explicit_formula.hpp>

#include <cstdio>

int main() {
    using namespace zerosum;
    const auto h = bump(2.5, 1.0).as_fn();
    const double T = 500.0;
    ZeroStore store;
    std::printf("%-10s %8s %22s %22s %10s %10s\n", "L", "zeros", "spectral", "arithmetic", "diff", "budget");
    for (const char* label : {"1.1", "4.3", "5.2"}) {
        const auto L = dirichlet_lfunction(character_from_label(label));
        populate(store, L, T);
        const auto r = verify(L, h, store, 1e-6, T);
        std::printf("%-10s %8zu %22.15f %22.15f %10.2e %10.2e %s\n", L.label.c_str(), r.zeros_used,
                    r.spectral.real(), r.arithmetic.real(), r.discrepancy, r.budget, r.pass ? "PASS" : "FAIL");
    }
}
