# Copyright 2026 The qec-sense Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference values frozen into the C++ tests.

Computed with numpy/scipy only: dense matrix exponentials of the Liouvillian,
projection onto the coherence block, and direct Kraus algebra. Not run by
ctest; rerun by hand and paste the printed values if a convention changes.
"""

import itertools
import math

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def on(op, j, n=3):
    mats = [op if k == j else I2 for k in range(n)]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def liouvillian(omega, g, gq):
    d = 8
    H = sum(0.5 * omega * on(Z, j) for j in range(3))
    Ls = [math.sqrt(g) * on(X, j) for j in range(3)] if g > 0 else []
    if gq > 0:
        for j in range(3):
            k, l = (j + 1) % 3, (j + 2) % 3
            pk = 0.5 * (np.eye(d) - on(Z, j) @ on(Z, k))
            pl = 0.5 * (np.eye(d) - on(Z, j) @ on(Z, l))
            Ls.append(math.sqrt(gq) * on(X, j) @ pk @ pl)
    Id = np.eye(d)
    # column stacking: vec(A X B) = (B^T kron A) vec(X)
    S = -1j * (np.kron(Id, H) - np.kron(H.T, Id))
    for L in Ls:
        LdL = L.conj().T @ L
        S += np.kron(L.conj(), L) - 0.5 * np.kron(Id, LdL) - 0.5 * np.kron(LdL.T, Id)
    return S


def ramsey_rho():
    psi = np.zeros(8, dtype=complex)
    psi[0] = psi[7] = 1 / math.sqrt(2)
    return np.outer(psi, psi.conj())


def sx_logical(rho):
    return 2 * rho[0, 7].real


def evolve(omega, g, gq, tau):
    S = liouvillian(omega, g, gq)
    v = ramsey_rho().reshape(-1, order="F")
    return (expm(S * tau) @ v).reshape(8, 8, order="F")


def coherence_block(omega, g, gq):
    """4x4 generator on (q, e, e*, q*) obtained by projecting the Liouvillian."""
    S = liouvillian(omega, g, gq)
    pairs = {"q": [(0, 7)], "e": [(4, 3), (2, 5), (1, 6)], "es": [(3, 4), (5, 2), (6, 1)], "qs": [(7, 0)]}
    names = ["q", "e", "es", "qs"]
    M = np.zeros((4, 4), dtype=complex)
    for b, nb in enumerate(names):
        B = np.zeros((8, 8), dtype=complex)
        for (i, j) in pairs[nb]:
            B[i, j] = 1.0 / len(pairs[nb])
        LB = (S @ B.reshape(-1, order="F")).reshape(8, 8, order="F")
        for a, na in enumerate(names):
            M[a, b] = sum(LB[i, j] for (i, j) in pairs[na])
    return M


def q_block(omega, g, gq, tau):
    M = coherence_block(omega, g, gq)[:2, :2]
    return (expm(M * tau) @ np.array([0.5, 0.0]))[0]


def channel_apply(kraus, rho):
    return sum(K @ rho @ K.conj().T for K in kraus)


def discrete_corrected(c, dtau, noise_kraus, omega=1.0):
    U = np.diag([np.exp(-0.5j * omega * dtau * (3 - 2 * bin(s).count("1"))) for s in range(8)])
    P0 = 0.25 * (np.eye(8) + on(Z, 0) @ on(Z, 1)) @ (np.eye(8) + on(Z, 1) @ on(Z, 2))
    C = [P0]
    for j in range(3):
        k, l = (j + 1) % 3, (j + 2) % 3
        Pj = 0.25 * (np.eye(8) - on(Z, j) @ on(Z, k)) @ (np.eye(8) - on(Z, j) @ on(Z, l))
        C.append(on(X, j) @ Pj)
    rho = ramsey_rho()
    out = []
    for _ in range(c):
        rho = channel_apply(noise_kraus, rho)
        rho = U @ rho @ U.conj().T
        rho = channel_apply(C, rho)
        out.append(sx_logical(rho))
    return out


def optimal_noise(pn):
    return [math.sqrt(1 - pn) * np.eye(8)] + [math.sqrt(pn / 3) * on(X, j) for j in range(3)]


def realistic_noise(p):
    pn = 3 * p + 3 * p * p + p ** 3
    ks = [math.sqrt(1 - pn) * np.eye(8)] + [math.sqrt(p) * on(X, j) for j in range(3)]
    ks += [p * on(X, a) @ on(X, b) for a, b in itertools.combinations(range(3), 2)]
    ks.append(math.sqrt(p ** 3) * on(X, 0) @ on(X, 1) @ on(X, 2))
    return ks


def binomial_sum(c, dtau, pn, omega=1.0):
    tau = c * dtau
    s = sum(math.comb(c, k) * (1 - pn) ** (c - k) * pn ** k * np.exp(-2j * omega * dtau * k) for k in range(c + 1))
    return (np.exp(3j * omega * tau) * s).real


def main():
    print("// lindblad <sigma_x^L>")
    for (g, gq) in [(0.1, 5.0), (0.2, 16.6), (0.1, 0.0), (0.3, 2.0)]:
        for tau in [0.5, 2.0, 7.3, 15.0]:
            print(f"{{{g}, {gq}, {tau}, {sx_logical(evolve(1.0, g, gq, tau)):.17g}}},")
    print("// closed form q (q, e) block")
    for (g, gq) in [(0.1, 5.0), (0.2, 16.6), (0.05, 1.0), (0.3, 2.0)]:
        for tau in [0.5, 2.0, 7.3, 15.0]:
            q = q_block(1.0, g, gq, tau)
            print(f"{{{g}, {gq}, {tau}, {2 * q.real:.17g}}},")
    print("// dominant eigenvalue of the (q, e) block: -3 gamma_eff - 3 i omega_eff")
    for (g, gq) in [(0.1, 5.0), (0.2, 16.6), (0.1, 50.0)]:
        ev = np.linalg.eigvals(coherence_block(1.0, g, gq)[:2, :2])
        lam = ev[np.argmax(ev.real)]
        print(f"{{{g}, {gq}, {-lam.imag / 3:.17g}, {-lam.real / 3:.17g}, {1 / abs(lam.real):.17g}}},")
    print("// discrete corrected <sigma_x^L>, c = 1..10 at dtau = 0.1")
    print("optimal 0.1:", ", ".join(f"{v:.17g}" for v in discrete_corrected(10, 0.1, optimal_noise(0.1))))
    print("binomial 0.1:", ", ".join(f"{binomial_sum(c, 0.1, 0.1):.17g}" for c in range(1, 11)))
    print("realistic 0.05:", ", ".join(f"{v:.17g}" for v in discrete_corrected(10, 0.1, realistic_noise(0.05))))


if __name__ == "__main__":
    main()
