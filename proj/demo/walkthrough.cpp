// Small tour of the library on the odd character mod 3.
#include <cstdio>

#include "lcrit/lcrit.hpp"

int main() {
    using namespace lcrit;
    const auto chi = odd_primitive_characters(3).at(0);
    std::printf("chi mod %llu, index %zu, conductor %llu, parity %d\n",
                static_cast<unsigned long long>(chi.modulus()), chi.index(),
                static_cast<unsigned long long>(chi.conductor()), chi.parity());

    // L(1, chi) = pi / (3 sqrt 3)
    const auto l1 = l_eval({0.5, 0.0}, chi);
    std::printf("L(1) = %.15f  (pi/3sqrt3 = %.15f)\n", l1.value.real(), pi / (3 * std::sqrt(3.0)));

    const CompletedL xi(chi);
    for (const auto& z : find_zeros_on_line(xi, 0.0, 20.0, 0.05))
        std::printf("zero on the line at t = %.10f\n", z.t_zero);

    const auto l3 = critical_curvature(5.0, xi);
    std::printf("[eta']^2 - eta eta'' at t=5: %.6e (difference route %.6e)\n", l3.value, l3.cross_check);

    const auto primes = sieve_primes(1'000'000);
    const EulerProduct ep(chi, primes);
    const auto w = WindowParams::make(1'000'000);
    for (double t : {5.0, 8.04, 12.0})
        std::printf("windowed Euler ratio at t=%.2f: exact %.4f, cosine %.4f\n", t, ep.windowed_exact(t, 0.0, w),
                    ep.windowed_approx(t, 0.0, w));

    const auto tc = find_t_cross(PrefactorParams::for_character(chi));
    std::printf("prefactor derivative changes sign at t = %.5f\n", tc.t);
}
