"""Independent sympy computation of E0 reference values.

Run: python3 crates/core/tests/oracle/e0_oracle.py
The printed values are frozen into crates/core/tests/oracle_values.rs.
"""
import itertools
import sympy as sp

x1, x2 = sp.symbols("x1 x2")
X = [x1, x2]
# generator order X11, X21, X12, X22; name X{sub}{sup}
GENS = [(1, 1), (1, 2), (2, 1), (2, 2)]  # (sup, sub)
NAMES = ["X11", "X21", "X12", "X22"]
M = 4


def idx(sup, sub):
    return GENS.index((sup, sub))


def anchor(a):
    sup, sub = GENS[a]
    v = [0, 0]
    v[sub - 1] = X[sup - 1] ** 2
    return v


def vf_apply(v, f):
    return sp.expand(sum(c * sp.diff(f, xx) for c, xx in zip(v, X)))


def struct(a, b):
    """[X_j^i, X_l^k] = 2 x^k d_jk X_l^i - 2 x^i d_li X_j^k."""
    i, j = GENS[a]
    k, l = GENS[b]
    out = [0] * M
    if j == k:
        out[idx(i, l)] += 2 * X[k - 1]
    if l == i:
        out[idx(k, j)] -= 2 * X[i - 1]
    return [sp.expand(c) for c in out]


def bracket(s, t):
    out = [0] * M
    for a in range(M):
        for b in range(M):
            if s[a] == 0 or t[b] == 0:
                continue
            out[b] += s[a] * vf_apply(anchor(a), t[b])
            out[a] -= t[b] * vf_apply(anchor(b), s[a])
            c = struct(a, b)
            for e in range(M):
                out[e] += s[a] * t[b] * c[e]
    return [sp.expand(c) for c in out]


def gen(a):
    v = [0] * M
    v[a] = 1
    return v


def add(*vs):
    return [sp.expand(sum(c)) for c in zip(*vs)]


def jac(a, b, c):
    A, B, C = gen(a), gen(b), gen(c)
    return add(bracket(A, bracket(B, C)), bracket(B, bracket(C, A)), bracket(C, bracket(A, B)))


def fmt(s):
    return " + ".join(f"({sp.factor(c)})*{NAMES[i]}" for i, c in enumerate(s) if c != 0) or "0"


Xc1 = [x2**2, 0, -(x1**2), 0]
Xc2 = [0, x2**2, 0, -(x1**2)]


def d_form(omega, k):
    """omega: dict sorted k-tuple -> expr, alternating; returns (k+1)-form."""

    def val(key):
        key = list(key)
        if len(set(key)) < len(key):
            return 0
        perm = sorted(range(len(key)), key=lambda p: key[p])
        sign = sp.combinatorics.Permutation(perm).signature()
        return sign * omega.get(tuple(sorted(key)), 0)

    out = {}
    for key in itertools.combinations(range(M), k + 1):
        v = 0
        for i in range(k + 1):
            rest = key[:i] + key[i + 1:]
            v += (-1) ** i * vf_apply(anchor(key[i]), val(rest))
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = tuple(key[p] for p in range(k + 1) if p not in (i, j))
                br = struct(key[i], key[j])
                for c in range(M):
                    if br[c] != 0:
                        v += (-1) ** (i + j) * br[c] * val((c,) + rest)
        v = sp.expand(v)
        if v != 0:
            out[key] = v
    return out


def main():
    print("# Jacobiator on generator triples")
    for t in itertools.combinations(range(M), 3):
        print([NAMES[i] for i in t], fmt(jac(*t)))
    print("# rho(J) == 0 check:", all(
        sp.expand(sum(j[a] * anchor(a)[r] for a in range(M))) == 0
        for t in itertools.combinations(range(M), 3) for j in [jac(*t)] for r in range(2)))
    print("# d^2 of dual 1-forms, and omega(J) on the same triples")
    for al in range(M):
        d2 = d_form(d_form({(al,): 1}, 1), 2)
        oj = {t: jac(*t)[al] for t in itertools.combinations(range(M), 3) if jac(*t)[al] != 0}
        print(f"w({NAMES[al]})", {tuple(NAMES[i] for i in k): v for k, v in d2.items()},
              "omega(J):", {tuple(NAMES[i] for i in k): v for k, v in oj.items()})
    print("# d w(X21)")
    print({tuple(NAMES[i] for i in k): v for k, v in d_form({(1,): 1}, 1).items()})
    print("# d x1")
    print({tuple(NAMES[i] for i in k): v for k, v in d_form({(): x1}, 0).items()})
    print("# itemized variant defect: [X11,X21] = 2 x2 X21")
    r0, r1 = anchor(0), anchor(1)
    lie = [sp.expand(vf_apply(r0, r1[q]) - vf_apply(r1, r0[q])) for q in range(2)]
    rho_br = [sp.expand(2 * x2 * anchor(1)[q]) for q in range(2)]
    print("  [rho X11, rho X21] - rho(2 x2 X21) =", [sp.expand(a - b) for a, b in zip(lie, rho_br)])
    print("# A1 = X11 + X12, B1 = X21 + X22")
    A1 = [1, 0, 1, 0]
    B1 = [0, 1, 0, 1]
    print("  [A1,B1] =", bracket(A1, B1))
    print("# kernel brackets [Xc, X]")
    for nm, xc in (("Xc1", Xc1), ("Xc2", Xc2)):
        for a in range(M):
            print(f"  [{nm},{NAMES[a]}] =", fmt(bracket(xc, gen(a))))
    print("  [Xc1,Xc2] =", fmt(bracket(Xc1, Xc2)))
    print("# Courant: G constant with G14 = G41 = 1, G23 = G32 = -1")
    rho = sp.Matrix([anchor(a) for a in range(M)]).T  # 2 x 4
    G = sp.zeros(4, 4)
    G[0, 3] = G[3, 0] = 1
    G[1, 2] = G[2, 1] = -1
    print("  rho G rho^T =", (rho * G * rho.T).applyfunc(sp.expand), "det G =", G.det())
    print("  identity defect =", (rho * rho.T).applyfunc(sp.expand))
    print("# torsion-free connection nabla_{X_j^i} X_l^k = 2 x^k d_jk X_l^i")

    def gamma(b, a):  # nabla_{e_b} e_a
        i, j = GENS[b]
        k, l = GENS[a]
        out = [0] * M
        if j == k:
            out[idx(i, l)] += 2 * X[k - 1]
        return out

    def nabla(s, t):
        out = [0] * M
        for b in range(M):
            if s[b] == 0:
                continue
            for a in range(M):
                if t[a] == 0:
                    continue
                out[a] += s[b] * vf_apply(anchor(b), t[a])
                g = gamma(b, a)
                for c in range(M):
                    out[c] += s[b] * t[a] * g[c]
        return [sp.expand(c) for c in out]

    def curv(a, b, c):
        A, B, C = gen(a), gen(b), gen(c)
        return add(nabla(A, nabla(B, C)), [-v for v in nabla(B, nabla(A, C))], [-v for v in nabla(bracket(A, B), C)])

    print("  torsion zero:", all(
        add(nabla(gen(a), gen(b)), [-v for v in nabla(gen(b), gen(a))], [-v for v in bracket(gen(a), gen(b))]) == [0] * M
        for a in range(M) for b in range(M)))
    print("  R(X11,X12)X21 =", fmt(curv(0, 2, 1)))
    tr = {}
    for a, b in itertools.combinations(range(M), 2):
        v = sp.expand(sum(curv(a, b, c)[c] for c in range(M)))
        if v != 0:
            tr[(NAMES[a], NAMES[b])] = v
    print("  Tr R =", tr)
    theta0 = {}
    for b in range(M):
        v = sp.expand(sum(gamma(b, a)[a] for a in range(M)))
        if v != 0:
            theta0[(b,)] = v
    print("  theta0 =", {NAMES[k[0]]: v for k, v in theta0.items()})
    print("  d theta0 =", {tuple(NAMES[i] for i in k): v for k, v in d_form(theta0, 1).items()})
    tr2 = {}
    for key in itertools.combinations(range(M), 4):
        pass
    print("# Nijenhuis of J: J(X11) = -X21, J(X21) = X11, J(X12) = -X22, J(X22) = X12")
    Jm = sp.zeros(4, 4)
    Jm[1, 0] = -1
    Jm[0, 1] = 1
    Jm[3, 2] = -1
    Jm[2, 3] = 1

    def J(s):
        v = Jm * sp.Matrix(s)
        return [sp.expand(c) for c in v]

    ok = True
    for a in range(M):
        for b in range(M):
            A, B = gen(a), gen(b)
            n = add(bracket(J(A), J(B)), [-v for v in J(bracket(J(A), B))], [-v for v in J(bracket(A, J(B)))],
                    [-v for v in bracket(A, B)])
            ok = ok and n == [0] * M
    print("  J^2 = -I:", Jm * Jm == -sp.eye(4), " N_J = 0:", ok)


if __name__ == "__main__":
    main()
