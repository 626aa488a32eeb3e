"""Random instances shared by the unit and acceptance tests."""

from __future__ import annotations

import random

from zerocohom.exactalg import (GroupHom, IntMatrix, PresentedAbelianGroup, hstack,
                                kernel_basis, vstack)


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 6) -> IntMatrix:
    return IntMatrix([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)],
                     rows, cols)


def random_unimodular_pair(rng: random.Random, n: int) -> tuple[IntMatrix, IntMatrix]:
    """``U`` and ``U^-1`` built from elementary row operations."""
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Ui = [row[:] for row in U]
    for _ in range(3 * n if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-2, 2)
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]          # E U
        for r in Ui:                                            # Ui E^-1
            r[j] -= q * r[i]
    return IntMatrix(U, n, n), IntMatrix(Ui, n, n)


def random_two_term_complex(rng: random.Random) -> tuple[GroupHom, GroupHom]:
    """``A --d_in--> B --d_out--> C`` on free groups with ``d_out d_in = 0``."""
    n = rng.randint(1, 6)
    k = rng.randint(0, 5)
    m = rng.randint(0, 5)
    low = rng.randint(1, max(1, k))
    d_out = random_matrix(rng, k, low, 4) @ random_matrix(rng, low, n, 4) if k else \
        IntMatrix.zeros(0, n)
    K = kernel_basis(d_out)
    d_in = K @ random_matrix(rng, K.cols, m, 3) if K.cols else IntMatrix.zeros(n, m)
    A, B, C = (PresentedAbelianGroup.free(r) for r in (m, n, k))
    return GroupHom(B, C, d_out), GroupHom(A, B, d_in)


def change_presentation(rng: random.Random, d_out: GroupHom,
                        d_in: GroupHom) -> tuple[GroupHom, GroupHom]:
    """An isomorphic complex: new basis of ``B`` plus redundant generators
    with defining relations in ``B`` and ``C``."""
    B, C = d_out.source, d_out.target
    n, k = B.rank, C.rank
    U, Ui = random_unimodular_pair(rng, n)
    # B' = Z^(n+1) / (e - w), e a new generator equal to w in the new basis
    w = [rng.randint(-2, 2) for _ in range(n)]
    R_B = IntMatrix([[-x] for x in w] + [[1]], n + 1, 1)
    B2 = PresentedAbelianGroup(n + 1, R_B)
    in2 = vstack(U @ d_in.matrix, IntMatrix.zeros(1, d_in.matrix.cols))
    out_new = d_out.matrix @ Ui
    out2 = hstack(out_new, IntMatrix.from_columns([out_new.apply(w)], k))
    # C' = C + Z/1, a redundant generator killed outright
    R_C = IntMatrix([[0]] * k + [[1]], k + 1, 1)
    C2 = PresentedAbelianGroup(k + 1, R_C)
    out2 = vstack(out2, IntMatrix([[rng.randint(-3, 3) for _ in range(n + 1)]], 1, n + 1))
    return GroupHom(B2, C2, out2), GroupHom(d_in.source, B2, in2)
