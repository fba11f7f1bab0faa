"""Writes the mesh and table fixtures in this directory."""


def write_off(name, verts, faces):
    with open(name, "w") as f:
        f.write(f"OFF\n{len(verts)} {len(faces)} 0\n")
        for v in verts:
            f.write(" ".join(f"{c:g}" for c in v) + "\n")
        for face in faces:
            f.write(f"{len(face)} " + " ".join(map(str, face)) + "\n")


def disc():
    import math
    verts = [(0, 0, 0)] + [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3), 0) for k in range(6)]
    faces = [[0, 1 + k, 1 + (k + 1) % 6] for k in range(6)]
    write_off("disc.off", verts, faces)


def sphere():
    verts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    faces = []
    for a in (0, 1):
        for b in (2, 3):
            for c in (4, 5):
                faces.append([a, b, c] if (a + b + c) % 2 else [a, c, b])
    write_off("sphere.off", verts, faces)


def torus_grid(n, m, offset=0, skip=None):
    import math
    idx = lambda i, j: offset + (i % n) * m + (j % m)
    verts = []
    for i in range(n):
        for j in range(m):
            u, v = 2 * math.pi * i / n, 2 * math.pi * j / m
            verts.append(((2 + math.cos(v)) * math.cos(u), (2 + math.cos(v)) * math.sin(u), math.sin(v)))
    faces = [
        [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]
        for i in range(n)
        for j in range(m)
        if (i, j) != skip
    ]
    return verts, faces


def torus():
    verts, quads = torus_grid(6, 4)
    faces = []
    for a, b, c, d in quads:
        faces += [[a, b, c], [a, c, d]]
    write_off("torus.off", verts, faces)


def moebius():
    k = 6
    verts = [(i, 0, 1) for i in range(k)] + [(i, 0, -1) for i in range(k)]
    t, b = (lambda i: i), (lambda i: k + i)
    faces = [[t(i), t(i + 1), b(i + 1), b(i)] for i in range(k - 1)]
    faces.append([t(k - 1), b(0), t(0), b(k - 1)])
    write_off("moebius.off", verts, faces)


def two_tori():
    n = m = 4
    va, fa = torus_grid(n, m, 0, skip=(0, 0))
    vb, fb = torus_grid(n, m, n * m, skip=(0, 0))
    glue = {n * m + i * m + j: i * m + j for i, j in [(0, 0), (1, 0), (1, 1), (0, 1)]}
    keep = [v for v in range(n * m, 2 * n * m) if v not in glue]
    renumber = {v: n * m + k for k, v in enumerate(keep)}
    renumber.update(glue)
    verts = va + [(x + 6, y, z) for k, (x, y, z) in enumerate(vb) if n * m + k in renumber and n * m + k not in glue]
    faces = fa + [[renumber[v] for v in f] for f in fb]
    write_off("two_tori.off", verts, faces)


def table(name, n, rows, comment):
    with open(name, "w") as f:
        f.write(f"# {comment}\n")
        f.write(f"gmap {n} {len(rows[0])}\n")
        for i, r in enumerate(rows):
            f.write(f"alpha{i} " + " ".join(map(str, r)) + "\n")


def projective_volume():
    rows = [
        [2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 12, 11],
        [8, 3, 2, 5, 4, 7, 6, 1, 11, 12, 9, 10],
        [11, 12, 7, 8, 9, 10, 3, 4, 5, 6, 1, 2],
    ]
    table("projective_volume.gmap", 3, rows, "a volume bounded by a projective plane; alpha3 is the identity")


def pairs(n, ps):
    a = list(range(1, n + 1))
    for x, y in ps:
        a[x - 1], a[y - 1] = y, x
    return a


def three_faces():
    a0 = pairs(24, [(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12), (13, 14), (15, 16),
                    (17, 18), (19, 20), (21, 22), (23, 24)])
    a1 = pairs(24, [(2, 3), (4, 5), (6, 1), (7, 14), (13, 12), (11, 10), (9, 8),
                    (24, 15), (16, 17), (18, 19), (20, 21), (22, 23)])
    a2 = pairs(24, [(1, 23), (2, 24), (3, 7), (4, 8), (13, 16), (14, 15)])
    table("three_faces.gmap", 2, [a0, a1, a2], "three faces around an interior vertex")


if __name__ == "__main__":
    disc()
    sphere()
    torus()
    moebius()
    two_tori()
    projective_volume()
    three_faces()
