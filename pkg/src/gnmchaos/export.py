"""
Writers for the plain-text outputs: CSV tables, JSON search results and
gnuplot scripts that render them.

Floats are written with ``repr`` so files round-trip exactly.
"""

import csv
import json
from pathlib import Path

from .funcspace import COMPARE_HEADER

SEARCH_FIELDS = ["mu1_mohm", "mu2_v", "mu3_v", "cb", "vref_v", "n", "function", "margin_v"]


def _num(v):
    return repr(float(v))


def _writer(path):
    fh = open(Path(path), "w", newline="", encoding="utf-8")
    return fh, csv.writer(fh, lineterminator="\n")


def write_orbit_csv(path, orbit):
    fh, w = _writer(path)
    with fh:
        w.writerow(["k", "x_volts"])
        for k, x in zip(orbit.indices.tolist(), orbit.samples.tolist()):
            w.writerow([k, _num(x)])


def write_bifurcation_csv(path, data):
    fh, w = _writer(path)
    with fh:
        w.writerow(["axis_value", "sample"])
        for v, samples in data.rows:
            sv = _num(v)
            for x in samples.tolist():
                w.writerow([sv, _num(x)])


def write_lyapunov_csv(path, curve):
    fh, w = _writer(path)
    with fh:
        w.writerow(["axis_value", "lambda"])
        for v, lam in curve.rows:
            w.writerow([_num(v), _num(lam)])


def write_map_csv(path, xs, ys):
    fh, w = _writer(path)
    with fh:
        w.writerow(["x_volts", "y_volts"])
        for x, y in zip(xs, ys):
            w.writerow([_num(x), _num(y)])


def write_search_json(path, results):
    with open(Path(path), "w", encoding="utf-8") as fh:
        json.dump([r.as_record() for r in results], fh, indent=2)
        fh.write("\n")


def write_search_csv(path, results):
    fh, w = _writer(path)
    with fh:
        w.writerow(SEARCH_FIELDS)
        for r in results:
            rec = r.as_record()
            w.writerow([rec[k] if k in ("cb", "n", "function") else _num(rec[k]) for k in SEARCH_FIELDS])


def write_funcspace_csv(path, rows):
    fh, w = _writer(path)
    with fh:
        fh.write("# " + COMPARE_HEADER + "\n")
        w.writerow(["n", "f1", "f2", "f3", "f4", "log10_f1", "log10_f2", "log10_f3", "log10_f4"])
        for r in rows:
            w.writerow([r.n, r.f1, r.f2, r.f3, r.f4] + [_num(v) for v in r.log10])


def _axis_label(axis):
    return {"mu1": "mu1 (MOhm)", "mu2": "mu2 (V)", "mu3": "mu3 (V)"}.get(axis, axis)


def gnuplot_bifurcation(csv_name, axis, out_name="bifurcation.png"):
    return (
        "set datafile separator ','\n"
        "set terminal pngcairo size 900,600\n"
        f"set output '{out_name}'\n"
        f"set xlabel '{_axis_label(axis)}'\n"
        "set ylabel 'x (V)'\n"
        "unset key\n"
        f"plot '{csv_name}' every ::1 using 1:2 with dots lc rgb 'black'\n"
    )


def gnuplot_lyapunov(csv_name, axis, out_name="lyapunov.png"):
    return (
        "set datafile separator ','\n"
        "set terminal pngcairo size 900,600\n"
        f"set output '{out_name}'\n"
        f"set xlabel '{_axis_label(axis)}'\n"
        "set ylabel 'lambda (nats/iteration)'\n"
        "unset key\n"
        "set xzeroaxis\n"
        f"plot '{csv_name}' every ::1 using 1:2 with lines lw 1.5\n"
    )


def gnuplot_funcspace(csv_name, out_name="funcspace.png"):
    return (
        "set datafile separator ','\n"
        "set datafile commentschars '#'\n"
        "set terminal pngcairo size 900,600\n"
        f"set output '{out_name}'\n"
        "set xlabel 'iterations n'\n"
        "set ylabel 'log10 functionality space'\n"
        "set key left top\n"
        f"plot for [i=6:9] '{csv_name}' every ::1 using 1:i with linespoints title columnhead(i)\n"
    )


def gnuplot_transfer(csv_name, out_name="transfer.png"):
    return (
        "set datafile separator ','\n"
        "set terminal pngcairo size 900,600\n"
        f"set output '{out_name}'\n"
        "set xlabel 'x_n (V)'\n"
        "set ylabel 'x_{n+1} (V)'\n"
        "unset key\n"
        f"plot '{csv_name}' every ::1 using 1:2 with lines, x with lines dt 2\n"
    )
