"""Independent reference values for the TFIM chain, computed with numpy.

Chain sites 0..N-1, first site is the most significant tensor factor,
sigma_z = diag(1, -1) so "up" is basis state 0. Boundary sites -1 and N are
frozen up, which turns the two boundary bonds into fields -J sigma_z on the
end sites.

    H = -J sum_i z_i z_{i+1} - J (z_0 + z_{N-1}) - h sum_i z_i - lam sum_i x_i

Prints values in a form that can be pasted into Rust tests.
"""
import numpy as np
from scipy.linalg import expm

X = np.array([[0.0, 1.0], [1.0, 0.0]])
Z = np.diag([1.0, -1.0])
I = np.eye(2)


def op(single, site, n):
    out = np.array([[1.0]])
    for k in range(n):
        out = np.kron(out, single if k == site else I)
    return out


def tfim(n, J, h, lam):
    H = np.zeros((2**n, 2**n))
    for i in range(n - 1):
        H -= J * op(Z, i, n) @ op(Z, i + 1, n)
    H -= J * (op(Z, 0, n) + op(Z, n - 1, n))
    for i in range(n):
        H -= h * op(Z, i, n) + lam * op(X, i, n)
    return H


def stats(n, J, h, lam, beta, deltas=(0.15, 0.5), t=1.0, offset=0.2):
    H = tfim(n, J, h, lam)
    rho = expm(-beta * H)
    rho /= np.trace(rho)
    kappa = np.sort(np.linalg.eigvalsh(rho))[::-1]
    kappa = kappa[kappa > 0]
    ent = -np.sum(kappa * np.log2(kappa))
    E = np.linalg.eigvalsh(H)
    lnz = np.log(np.sum(np.exp(-beta * (E - E.min())))) - beta * E.min()
    g = np.trace(rho @ H).real / n
    hb = ent / n
    out = dict(lnz=lnz, S=ent, g=g, f=-lnz / (beta * n))
    for d in deltas:
        lo, hi = 2.0 ** (-n * (hb + d)), 2.0 ** (-n * (hb - d))
        sel = (kappa >= lo) & (kappa <= hi)
        out[f"mass{d}"] = kappa[sel].sum()
        out[f"dim{d}"] = int(sel.sum())
    # characteristic function of -log kappa / n at tau = t / n, against e^{itg}
    w, v = np.linalg.eigh(H)
    p = np.exp(-beta * (w - w.min()))
    p /= p.sum()
    phi = np.sum(p * np.exp(1j * (t / n) * w))
    out["lln"] = abs(phi - np.exp(1j * t * g))
    R = max(0.0, hb - offset)
    out["best"] = np.sort(p)[::-1][: 2 ** min(n, int(np.floor(n * R)))].sum()
    return out


if __name__ == "__main__":
    for n in (2, 3, 4, 6):
        s = stats(n, 1.0, 0.5, 0.2, 2.0)
        print(f"tfim N={n} beta=2 lam=0.2:", {k: repr(float(v)) for k, v in s.items()})
    s = stats(4, 1.0, 0.5, 0.8, 0.5)
    print("tfim N=4 beta=0.5 lam=0.8:", {k: repr(float(v)) for k, v in s.items()})
    for n in range(4, 11):
        s = stats(n, 1.0, 0.5, 0.0, 2.0)
        print(f"classical N={n}: S={s['S']!r} lnz={s['lnz']!r}")
