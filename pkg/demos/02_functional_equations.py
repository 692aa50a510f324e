"""Functional equations for the test-function L-series, with twists.

For f of integral weight k, level N, character psi, companion g = f|_k W_N
and a Dirichlet character chi mod D coprime to N:

    L_{f_chi}(phi) = i^k chi(-N) psi(D) N^{1-k/2} L_{g_chibar}(phi|_{2-k} W_N),

and the renormalized-derivative series satisfies the same relation with
the opposite sign.  In half-integral weight the right side picks up the
Kronecker character mod D and an epsilon factor.  Both sides are computed
numerically from coefficient data alone; nothing assumes modularity.

Run:  python demos/02_functional_equations.py
"""

from maass_lseries import (
    characters_mod,
    fe_residual_half,
    fe_residual_int,
    fixture_pair,
    standard_battery,
    trivial_character,
)

battery = standard_battery()
chi1 = trivial_character(1)

# Level 1, weight 12: delta is self-dual under W_1 and i^12 = 1.
f, g = fixture_pair("delta", 256)
print("delta, D = 1:")
for phi in battery[:4]:
    rep, rep_d = fe_residual_int(f, g, chi1, phi)
    print(f"  {phi.label:8s}  FE residual {rep.rel_residual:.2e}"
          f"   companion {rep_d.rel_residual:.2e}")

# Weight 0: j - 744.  Same story with prefactor 1.
f, g = fixture_pair("j744", 768)
rep, _ = fe_residual_int(f, g, chi1, battery[5])
print(f"\nj744 residual on {battery[5].label}: {rep.rel_residual:.2e}")

# Twists: delta against every character mod 5.  The prefactor becomes
# chi(-1) and the right side is twisted by the conjugate character.
print("\ndelta twisted by characters mod 5:")
for chi in characters_mod(5):
    rep, _ = fe_residual_int(f if False else fixture_pair("delta", 768)[0],
                             fixture_pair("delta", 768)[1], chi, battery[4])
    print(f"  chi index {chi.index}: prefactor {rep.prefactor:+.3f}"
          f"   residual {rep.rel_residual:.2e}")

# Half-integral weight: theta on Gamma_0(4), k = 1/2.  Its involution
# fixes theta and the prefactor is 4^{3/4} = 2 sqrt 2.
f, g = fixture_pair("theta", 768)
print("\ntheta (half-integral):")
for phi in battery[:3]:
    rep, rep_d = fe_residual_half(f, g, chi1, phi)
    print(f"  {phi.label:8s}  prefactor {rep.prefactor.real:.6f}"
          f"   residual {rep.rel_residual:.2e}   companion {rep_d.rel_residual:.2e}")
