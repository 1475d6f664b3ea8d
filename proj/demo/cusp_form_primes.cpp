// Prime sums attached to the discriminant modular form: the c_2 part of the
// degree-2 split scaled by x^{1/2}, against the predicted constant -hhat(1/2)/2.
#include <zerosum/relations.hpp>

#include <cmath>
#include <cstdio>

int main() {
    using namespace zerosum;
    const auto h = bump(2.5, 1.0);
    const double C = -0.5 * mellin(h, 0.5).value.real();
    const auto D = delta_lfunction(40000, 40000);
    std::printf("predicted constant %.12f\n", C);
    std::printf("%8s %18s %18s %10s %10s\n", "x", "S", "S2 x^(1/2)", "ratio", "split err");
    for (double x : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto s = s_tilde_split(*D.euler, h, x);
        const double scaled = s.S2.real() * std::sqrt(x);
        std::printf("%8.0e %18.10f %18.12f %10.6f %10.2e\n", x, s.S.real(), scaled, scaled / C, s.split_error());
    }
}
