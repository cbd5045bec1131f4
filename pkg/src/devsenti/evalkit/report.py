"""JSON and aligned text renderings of evaluation results."""
import json

from ..labels import Label
from .metrics import PRFReport

COLUMNS = ("overall", Label.POSITIVE, Label.NEGATIVE, Label.NEUTRAL)


def _cells(report: PRFReport):
    out = []
    for col in COLUMNS:
        m = report.overall if col == "overall" else report.per_class[col]
        out += [m.R, m.P, m.F]
    return out


def _fmt(x):
    return f"{x:.2f}".lstrip("0") if x < 1 else f"{x:.2f}"


def prf_table(rows, extra=None):
    """Aligned table of ``[(name, PRFReport), ...]``; ``extra`` adds a last column."""
    head1 = ["", "Overall", "", "", "Positive", "", "", "Negative", "", "", "Neutral", "", ""]
    head2 = ["Setting"] + ["R", "P", "F"] * 4
    body = [[name] + [_fmt(v) for v in _cells(rep)] for name, rep in rows]
    if extra is not None:
        head1.append("")
        head2.append(extra[0])
        for line, value in zip(body, extra[1]):
            line.append(value)
    table = [head1, head2] + body
    widths = [max(len(r[i]) for r in table) for i in range(len(head2))]
    lines = []
    for r in table:
        first = r[0].ljust(widths[0])
        rest = [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join([first] + rest))
    return "\n".join(lines) + "\n"


def confusion_table(cm):
    from .metrics import CM_ORDER

    names = [l.value for l in CM_ORDER]
    w = max(len(n) for n in names + ["gold/pred"])
    cw = max(len(str(int(v))) for v in cm.counts.ravel().tolist() + [0])
    cw = max(cw, max(len(n) for n in names))
    lines = ["gold/pred".ljust(w) + "  " + "  ".join(n.rjust(cw) for n in names)]
    for name, row in zip(names, cm.counts):
        lines.append(name.ljust(w) + "  " + "  ".join(str(int(v)).rjust(cw) for v in row))
    return "\n".join(lines) + "\n"


def ablation_json(results):
    out = []
    for r in results:
        entry = {"setting": r.name, "metrics": r.report.to_json()}
        if r.significance is not None:
            entry["chi2"] = {"statistic": r.significance.statistic, "dof": r.significance.dof,
                             "p_value": r.significance.p_value}
        out.append(entry)
    return out


def ablation_table(results, alpha=0.05):
    marks = ["*" if r.significance is not None and r.significance.significant(alpha) else ""
             for r in results]
    return prf_table([(r.name, r.report) for r in results], (f"p<{alpha:g}", marks))


def dump_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
