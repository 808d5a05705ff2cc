import pytest

from billingsley import build_rho_table, build_sieve

# Oracle values computed independently of the library, before it was built,
# and frozen here.
#
# rho: the integral recursion rho(u) = rho(v) - int_v^u rho(t-1)/t dt marched
# on a 1e-6 grid with the composite trapezoid rule (the delayed argument lands
# exactly on grid nodes, so there is no interpolation error; total error is
# O(step^2) ~ 1e-12).  Cross-checked on [2, 3] against the closed form
# rho(u) = 1 - log u + int_2^u log(t-1)/t dt via adaptive quadrature; the two
# routes agree to 1e-13.
RHO_ORACLE = {
    1.5: 0.5945348918918356,     # analytic 1 - log 1.5
    2.0: 0.3068528194400547,     # analytic 1 - log 2
    2.5: 0.13031956183225069,
    3.0: 0.048608388291131455,
    3.5: 0.01622959324323589,
    4.0: 0.0049109256476703375,
}

# H_i: one-dimensional analytic reductions of the nested integrals, evaluated
# by adaptive quadrature --- H_2(u) = int_2^u log(t-1)/t dt, and H_3 by
# integrating the budget-constrained two-variable region over the outer
# coordinate.  1 - H_1 + H_2 - H_3 reproduced the rho oracle to 1e-13.
H_ORACLE = {
    (2, 2.5): 0.046610293706405806,
    (2, 3.0): 0.14722067695924124,
    (2, 3.5): 0.2714662886965588,
    (3, 3.5): 0.0024737269579548637,
}


@pytest.fixture(scope="session")
def table():
    return build_rho_table()  # default u_max 20, step 1e-4


@pytest.fixture(scope="session")
def sieve5():
    return build_sieve(10**5)


@pytest.fixture(scope="session")
def sieve6():
    return build_sieve(10**6)


@pytest.fixture(scope="session")
def sieve7():
    return build_sieve(10**7)
