"""Independent oracle for golden values used by the Rust test suites.

Works purely with explicit matrices (matrix commutators, traces, and a
sympy nullspace), never with structure-constant tables.
"""
import json
import itertools
import sympy as sp


def unit(n, i, j):
    m = sp.zeros(n, n)
    m[i, j] = 1
    return m


def coords(mat, basis):
    # Solve mat = sum c_k basis_k for c (basis given as matrices).
    n = mat.shape[0]
    cols = [b.reshape(n * n, 1) for b in basis]
    a = sp.Matrix.hstack(*cols)
    sol, params = a.gauss_jordan_solve(mat.reshape(n * n, 1))
    assert not params
    return list(sol)


def ad_matrix(x, basis):
    return sp.Matrix.hstack(*[sp.Matrix(coords(x * b - b * x, basis)) for b in basis])


def gram(basis):
    ads = [ad_matrix(b, basis) for b in basis]
    return [[(ads[i] * ads[j]).trace() for j in range(len(basis))] for i in range(len(basis))]


def sl2_basis():
    h = sp.diag(1, -1)
    return [h, unit(2, 0, 1), unit(2, 1, 0)]


def sl3_basis():
    n = 3
    hs = [unit(n, i, i) - unit(n, i + 1, i + 1) for i in range(n - 1)]
    pos = sorted([(i, j) for i in range(n) for j in range(i + 1, n)], key=lambda p: (p[1] - p[0], p))
    return hs + [unit(n, i, j) for i, j in pos] + [unit(n, j, i) for i, j in pos]


def heis1_basis():
    # x = E12, y = E23, z = E13 in strictly upper triangular 3x3
    return [unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)]


def der_dim(basis):
    n = len(basis)
    brk = lambda a, b: sp.Matrix(coords(a * b - b * a, basis))
    syms = sp.symbols(f"d0:{n*n}")
    d = sp.Matrix(n, n, syms)
    eqs = []
    e = [sp.eye(n)[:, k] for k in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        bij = brk(basis[i], basis[j])
        lhs = d * bij
        dbi = d * e[i]
        dbj = d * e[j]
        to_mat = lambda v: sum((v[k] * basis[k] for k in range(n)), sp.zeros(*basis[0].shape))
        rhs = sp.Matrix(coords(to_mat(dbi) * basis[j] - basis[j] * to_mat(dbi), basis)) + \
            sp.Matrix(coords(basis[i] * to_mat(dbj) - to_mat(dbj) * basis[i], basis))
        eqs.extend(list(lhs - rhs))
    a, _ = sp.linear_eq_to_matrix(eqs, syms)
    return n * n - a.rank()


def frac(x):
    return str(sp.Rational(x))




def control_defect():
    # T(v) = v + <v,v> h on sl(2), evaluated with explicit coordinates (h, e, f).
    g = sp.Matrix(gram(sl2_basis()))
    h, e, f = (sp.eye(3)[:, k] for k in range(3))
    kill = lambda u, v: (u.T * g * v)[0, 0]
    t = lambda v: v + kill(v, v) * h
    diff = t(e + f) - t(e) - t(f)
    return kill(diff, t(h))


if __name__ == "__main__":
    out = {
        "sl2_gram": [[frac(v) for v in row] for row in gram(sl2_basis())],
        "sl3_gram_rank": sp.Matrix(gram(sl3_basis())).rank(),
        "heisenberg1_gram": [[frac(v) for v in row] for row in gram(heis1_basis())],
        "heisenberg1_der_dim": der_dim(heis1_basis()),
        "sl2_der_dim": der_dim(sl2_basis()),
        "sl2_control_defect_e_f_h": frac(control_defect()),
    }
    print(json.dumps(out, indent=2))
