"""Brute-force evaluations used to cross-check the matrix constructions.

Everything here works directly with ambient matrices and evaluates the
defining formulas argument by argument, sharing nothing with the
minor/structure-constant code paths except coordinate read-out.
"""

from __future__ import annotations

from itertools import combinations

from .cohomology import Cochain, cochain_space
from .linalg import ONE, ZERO, Mat, inverse
from .models import GradedModel


def _value_matrix(model: GradedModel, phi: Cochain, args) -> Mat:
    return model.matrix_of(phi.evaluate(args))


def _multilinear(model: GradedModel, phi: Cochain, vectors) -> Mat:
    """``phi`` on arbitrary ``g_-1`` coordinate vectors, expanded over the basis."""
    N = model.ambient_size
    acc = Mat.zeros(N, N)
    if len(vectors) == 2:
        u, v = vectors
        for s1, a in enumerate(u):
            if not a:
                continue
            for s2, b in enumerate(v):
                if b and s1 != s2:
                    acc = acc + _value_matrix(model, phi, (s1, s2)).scale(a * b)
        return acc
    if len(vectors) == 1:
        for s, a in enumerate(vectors[0]):
            if a:
                acc = acc + _value_matrix(model, phi, (s,)).scale(a)
        return acc
    raise NotImplementedError("brute-force evaluation handles k <= 2")


def action_bruteforce(model: GradedModel, g: Mat, phi: Cochain) -> Cochain:
    """``(g . phi)(X, Y) = g phi(pi(g^-1 X g), pi(g^-1 Y g)) g^-1`` evaluated pointwise."""
    ginv = inverse(g)
    space = phi.space
    n = model.n
    proj = []
    for X in model.basis_neg1:
        c = model.coords(ginv @ X @ g)
        proj.append(c[:n])
    out = []
    for J in space.combos:
        val = _multilinear(model, phi, [proj[j] for j in J])
        out.extend(model.coords(g @ val @ ginv))
    return Cochain(space, tuple(out))


def four_term_bruteforce(model: GradedModel, A: Mat, W: Cochain) -> dict:
    """The four-term action evaluated on all basis triples.

    Returns ``{(eta, mu, nu): g_-1 coordinates}`` of
    ``[A, W(eta,mu)(nu)] - W([A,eta],mu)(nu) - W(eta,[A,mu])(nu) - W(eta,mu)([A,nu])``
    where ``W(eta, mu)(nu) = [W(eta, mu), nu]``.
    """
    n = model.n
    X = model.basis_neg1

    def neg1_coords(M):
        c = model.coords(M)
        if any(c[n:]):
            raise AssertionError("value left g_-1")
        return c[:n]

    def unit(s):
        v = [ZERO] * n
        v[s] = ONE
        return v

    adA = [neg1_coords(A.commutator(Xs)) for Xs in X]
    out = {}
    for eta in range(n):
        for mu in range(n):
            for nu in range(n):
                w = _multilinear(model, W, [unit(eta), unit(mu)])
                t1 = A.commutator(w.commutator(X[nu]))
                t2 = _multilinear(model, W, [adA[eta], unit(mu)]).commutator(X[nu])
                t3 = _multilinear(model, W, [unit(eta), adA[mu]]).commutator(X[nu])
                t4 = w.commutator(A.commutator(X[nu]))
                out[(eta, mu, nu)] = neg1_coords(t1 - t2 - t3 - t4)
    return out


def cochain_as_endomorphisms(model: GradedModel, W: Cochain) -> dict:
    """``{(eta, mu, nu): [W(eta, mu), X_nu]}`` for a ``g_0``-valued 2-cochain."""
    n = model.n
    out = {}
    for eta in range(n):
        for mu in range(n):
            for nu in range(n):
                if eta == mu:
                    out[(eta, mu, nu)] = [ZERO] * n
                    continue
                w = _value_matrix(model, W, (eta, mu))
                out[(eta, mu, nu)] = model.coords(w.commutator(model.basis_neg1[nu]))[:n]
    return out


def basis_cochains(model: GradedModel, k: int, value_degree=None):
    space = cochain_space(model, k)
    idx = space.slice(value_degree) if value_degree is not None else range(space.dim)
    for i in idx:
        coeffs = [ZERO] * space.dim
        coeffs[i] = ONE
        yield Cochain(space, tuple(coeffs))


def jacobi_violations(model: GradedModel) -> int:
    """Count basis triples where the Jacobi identity fails (matrix brackets)."""
    B = model.basis
    bad = 0
    for a, b, c in combinations(range(len(B)), 3):
        x, y, z = B[a], B[b], B[c]
        s = (x.commutator(y.commutator(z)) + y.commutator(z.commutator(x))
             + z.commutator(x.commutator(y)))
        if not s.is_zero():
            bad += 1
    return bad
