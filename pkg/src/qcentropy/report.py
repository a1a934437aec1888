"""CSV and figure output for entropy series."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .errors import OutputError  # noqa: E402
from .runner import CSV_COLUMNS, EntropySeries  # noqa: E402

CSV_HEADER = ",".join(CSV_COLUMNS)

# Quantum black / classical red; companion run blue / green.
_COLORS = {"q": "black", "cl": "red", "q2": "tab:blue", "cl2": "tab:green"}


def format_csv(series: EntropySeries) -> str:
    """Header plus one row per sample; floats in shortest round-trip repr."""
    cols = series.columns()
    rows = [CSV_HEADER]
    for i in range(len(series)):
        rows.append(",".join(repr(float(cols[c][i])) for c in CSV_COLUMNS))
    return "\n".join(rows) + "\n"


def read_csv(path) -> dict[str, list[float]]:
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    data = {h: [] for h in header}
    for line in lines[1:]:
        for h, v in zip(header, line.split(",")):
            data[h].append(float(v))
    return data


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from None


def plot_series(series: EntropySeries, path, title: str = "") -> Path:
    """Two stacked panels (linear, von Neumann) with quantum and classical curves."""
    path = Path(path)
    plt.rcParams["svg.hashsalt"] = "qcentropy"
    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(6.0, 6.0))
    runs = [(series, "q", "cl", "")]
    if series.companion is not None:
        runs.append((series.companion, "q2", "cl2", " (single Gaussian)"))
    for ax, (qcol, ccol, label) in zip(axes, (("S_L_q", "S_L_cl", "$S_L$"),
                                               ("S_V_q", "S_V_cl", "$S_V$"))):
        for s, kq, kc, suffix in runs:
            cols = s.columns()
            ax.plot(cols["t"], cols[qcol], color=_COLORS[kq], lw=1.2, label="quantum" + suffix)
            ax.plot(cols["t"], cols[ccol], color=_COLORS[kc], lw=1.2, label="classical" + suffix)
        ax.set_ylabel(label)
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
    axes[0].legend(frameon=False, fontsize=8)
    axes[-1].set_xlabel("$t$")
    if title:
        axes[0].set_title(title)
    fig.tight_layout()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from None
    finally:
        plt.close(fig)
    return path


def emit(series: EntropySeries, cfg, out_dir=".") -> list[Path]:
    """Write ``<name>.csv`` (plus ``<name>-companion.csv``) and optionally ``<name>.svg``."""
    if len(series) == 0:
        raise ValueError("refusing to emit an empty series")
    out_dir = Path(out_dir)
    csv_path = Path(cfg.csv) if cfg.csv else out_dir / f"{cfg.name}.csv"
    written = [csv_path]
    _write(csv_path, format_csv(series))
    if series.companion is not None:
        comp = csv_path.with_name(csv_path.stem + "-companion.csv")
        _write(comp, format_csv(series.companion))
        written.append(comp)
    if cfg.plot:
        title = f"{cfg.name}: {cfg.state_kind}, alpha={cfg.alpha:g}, E0={cfg.E0:g}"
        written.append(plot_series(series, csv_path.with_suffix(".svg"), title))
    return written
