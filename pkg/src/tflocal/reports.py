"""Fixed-header CSV writers. Floats use 17 significant digits."""
import csv
import io
import math

import numpy as np

DECAY_HEADER = ("N", "sigma", "log_N", "log_sigma")
SPECTRUM_HEADER = ("index", "re", "im", "modulus", "residual")
NORMS_HEADER = ("p", "q", "s", "value")


def fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    if x == 0:
        return "0"  # drops the sign of -0.0
    return format(x, ".17g")


def _log(x):
    return math.log(x) if x > 0 else -math.inf


def _render(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def decay_csv(report):
    rows = ((N, s, _log(N), _log(s)) for N, s in enumerate(report.sigma_profile))
    return _render(DECAY_HEADER, rows)


def spectrum_csv(E):
    rows = (
        (i, lam.real, lam.imag, abs(lam), res)
        for i, (lam, res) in enumerate(zip(E.eigenvalues, E.residuals))
    )
    return _render(SPECTRUM_HEADER, rows)


def norms_csv(rows):
    """``rows`` are ``(p, q, s, value)`` tuples."""
    return _render(NORMS_HEADER, rows)


def read_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [[float(v) for v in row] for row in r]
