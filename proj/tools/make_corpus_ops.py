#!/usr/bin/env python3
"""Regenerates the operator files under corpus/ops at full double precision."""
import json
import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "corpus", "ops")

S3 = 1.0 / math.sqrt(3.0)

W1 = [[S3 * v for v in row] for row in [
    [1, 1, 0, -1],
    [1, -1, 1, 0],
    [0, 1, 1, 1],
    [1, 0, -1, 1],
]]

W2 = [[S3 * v for v in row] for row in [
    [1, 1, 0, 1],
    [-1, 1, -1, 0],
    [0, 1, 1, -1],
    [1, 0, -1, -1],
]]

# exit projector |10><10| and its complement
P0 = [[1.0 if r == c == 2 else 0.0 for c in range(4)] for r in range(4)]
P1 = [[(1.0 if r == c else 0.0) - P0[r][c] for c in range(4)] for r in range(4)]

# [|00>] + [(|01>+|11>)/sqrt(2)]
INVN = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.5, 0.0, 0.5],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.5, 0.0, 0.5],
]

PSI0 = [[1.0, 0.0], [0.0, 0.0]]
PSI1 = [[0.0, 0.0], [0.0, 1.0]]
PSIP = [[0.5, 0.5], [0.5, 0.5]]
# (|0>+i|1>)/sqrt(2): off-diagonals are -+ i/2
PSIY = [[(0.5, 0.0), (0.0, -0.5)], [(0.0, 0.5), (0.5, 0.0)]]

# X on the target conditioned on the control being |0>
C0X = [
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
]

DEUTSCH_POST = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
]

HALF = [[0.5, 0.0], [0.0, 0.5]]


def entry(v):
    if isinstance(v, tuple):
        return [v[0], v[1]]
    return [v, 0.0]


def flat(*blocks):
    return [entry(v) for block in blocks for row in block for v in row]


def write(name, kind, shape, *blocks):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        json.dump({"kind": kind, "shape": shape, "data": flat(*blocks)}, f, indent=1)
        f.write("\n")
    print("wrote", path)


def kron(a, b):
    n, m = len(a), len(b)
    out = [[(0.0, 0.0) for _ in range(n * m)] for _ in range(n * m)]
    for i in range(n):
        for j in range(n):
            for k in range(m):
                for l in range(m):
                    ar, ai = entry(a[i][j])
                    br, bi = entry(b[k][l])
                    out[i * m + k][j * m + l] = (ar * br - ai * bi, ar * bi + ai * br)
    return out


def main():
    os.makedirs(OUT, exist_ok=True)
    write("w1.qmat", "unitary", [4, 4], W1)
    write("w2.qmat", "unitary", [4, 4], W2)
    write("mqwalk.qmat", "measurement", [2, 4, 4], P0, P1)
    write("invn.qmat", "hermitian", [4, 4], INVN)
    write("psi0.qmat", "hermitian", [2, 2], PSI0)
    write("psi1.qmat", "hermitian", [2, 2], PSI1)
    write("psip.qmat", "hermitian", [2, 2], PSIP)
    write("psiy.qmat", "hermitian", [2, 2], PSIY)
    write("c0x.qmat", "unitary", [4, 4], C0X)
    write("deutsch_post.qmat", "hermitian", [4, 4], DEUTSCH_POST)
    write("half.qmat", "hermitian", [2, 2], HALF)
    write("psi6.qmat", "hermitian", [4, 4], kron(PSIP, PSIY))


if __name__ == "__main__":
    main()
