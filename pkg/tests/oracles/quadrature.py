"""Independent pure-Python oracle for frozen regression constants.

Uses explicit loops with mirror / wrap ghost cells; imports nothing from the
package. Run directly to print the values frozen in the tests.
"""
import math


def cell_centers(n, length):
    h = length / n
    return [(i + 0.5) * h for i in range(n)]


def ghost(f, i, j, nx, ny, periodic):
    if periodic:
        return f[i % nx][j % ny]
    return f[min(max(i, 0), nx - 1)][min(max(j, 0), ny - 1)]


def lap(f, nx, ny, hx, hy, periodic):
    return [
        [
            (ghost(f, i + 1, j, nx, ny, periodic) - 2 * f[i][j] + ghost(f, i - 1, j, nx, ny, periodic)) / hx**2
            + (ghost(f, i, j + 1, nx, ny, periodic) - 2 * f[i][j] + ghost(f, i, j - 1, nx, ny, periodic)) / hy**2
            for j in range(ny)
        ]
        for i in range(nx)
    ]


def energy_terms(f, nx, ny, lx, ly, periodic):
    hx, hy = lx / nx, ly / ny
    w = hx * hy
    lf = lap(f, nx, ny, hx, hy, periodic)
    lap_sq = sum(lf[i][j] ** 2 for i in range(nx) for j in range(ny)) * w
    grad_sq = 0.0
    for i in range(nx if periodic else nx - 1):
        for j in range(ny):
            grad_sq += ((f[(i + 1) % nx][j] - f[i][j]) / hx) ** 2 * w
    for i in range(nx):
        for j in range(ny if periodic else ny - 1):
            grad_sq += ((f[i][(j + 1) % ny] - f[i][j]) / hy) ** 2 * w
    l2_sq = sum(f[i][j] ** 2 for i in range(nx) for j in range(ny)) * w
    e1 = sum(0.25 * f[i][j] ** 4 for i in range(nx) for j in range(ny)) * w
    return lap_sq, grad_sq, l2_sq, e1


def cosine_case(n=64, alpha=0.75):
    xs = cell_centers(n, 1.0)
    f = [[math.cos(2 * math.pi * x) * math.cos(2 * math.pi * y) for y in xs] for x in xs]
    lap_sq, grad_sq, l2_sq, e1 = energy_terms(f, n, n, 1.0, 1.0, False)
    return {
        "original_energy": 0.5 * lap_sq - grad_sq + 0.5 * alpha * l2_sq + e1,
        "e1h": e1,
        "r0": math.sqrt(e1),
    }


def crystal(x, y):
    return (
        0.07
        - 0.02 * math.cos(2 * math.pi * (x - 12) / 32) * math.sin(2 * math.pi * (y - 1) / 32)
        + 0.02 * math.cos(math.pi * (x + 10) / 32) ** 2 * math.cos(math.pi * (y + 3) / 32) ** 2
        - 0.01 * math.sin(4 * math.pi * x / 32) ** 2 * math.sin(4 * math.pi * (y - 6) / 32) ** 2
    )


def crystal_case(n=128, length=128.0):
    xs = cell_centers(n, length)
    total = math.fsum(crystal(x, y) for x in xs for y in xs)
    return {"mean": total / (n * n), "value_at_12_1": crystal(12.0, 1.0)}


if __name__ == "__main__":
    for k, v in cosine_case().items():
        print(f"cosine64 {k} = {v!r}")
    for k, v in crystal_case().items():
        print(f"crystal128 {k} = {v!r}")
