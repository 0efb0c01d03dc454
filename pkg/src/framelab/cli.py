"""Command line front end.

A thin client over the HTTP service: every subcommand builds a request,
posts it (in-process by default, or to --url), and prints the response as
canonical JSON or as a flat CSV table. Exit codes: 0 success, 1 input or
transport error, 2 analyzed input is not a frame, 3 benchmark correctness
mismatch, and nonzero from `suite` when any check fails.
"""

import dataclasses
import json
import sys
from typing import Optional

import click

from .serialize import dumps_canonical, write_csv


@dataclasses.dataclass
class RunConfig:
    url: Optional[str]
    tol: Optional[float]
    seed: int
    out: Optional[str]
    fmt: str

    def tol_spec(self):
        return None if self.tol is None else {"rel_eq": self.tol}


def _client(cfg: RunConfig):
    if cfg.url:
        import httpx

        return httpx.Client(base_url=cfg.url, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _fail(message: str, code: int = 1):
    click.echo(f"error: {message}", err=True)
    raise SystemExit(code)


def _call(cfg: RunConfig, path: str, payload: dict) -> dict:
    with _client(cfg) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail")
        except Exception:
            detail = resp.text
        if isinstance(detail, dict) and "error" in detail:
            _fail(f"{detail['error']}: {detail.get('message', '')}")
        _fail(str(detail))
    return resp.json()


def _emit(cfg: RunConfig, obj, rows=None, fieldnames=None):
    if cfg.fmt == "csv":
        if rows is None:
            _fail("this report has no flat table; use --format json")
        text = write_csv(rows, fieldnames)
    else:
        text = dumps_canonical(obj)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _load_doc(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        _fail(str(exc))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"malformed JSON in {path}: {exc}")


def _window_arg(text: str):
    """Window argument: inline JSON vector, @file, or a spec string."""
    if text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            _fail(f"malformed inline vector: {exc}")
    if text.startswith("@"):
        return _load_doc(text[1:])
    return text


@click.group()
@click.option("--url", default=None, envvar="FRAMELAB_URL", help="remote service URL (default: run in process)")
@click.option("--tol", type=float, default=None, help="override the relative equality threshold")
@click.option("--seed", type=int, default=0, help="seed for all randomized sweeps")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="write the report here instead of stdout")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", help="report format")
@click.pass_context
def main(ctx, url, tol, seed, out, fmt):
    """Finite frame diagnostics and discrete Gabor analysis."""
    ctx.obj = RunConfig(url=url, tol=tol, seed=seed, out=out, fmt=fmt)


@main.command()
@click.argument("frame_file")
@click.pass_obj
def analyze(cfg, frame_file):
    """Diagnose a frame JSON file (use - for stdin)."""
    doc = _load_doc(frame_file)
    resp = _call(cfg, "/analyze", {"frame": doc, "tol": cfg.tol_spec()})
    rows = [{"index": i, **vc} for i, vc in enumerate(resp["diagnostics"]["per_vector"])]
    _emit(cfg, resp, rows)
    if not resp["diagnostics"]["is_frame"]:
        raise SystemExit(2)


@main.command()
@click.option("-L", "L", type=int, required=True)
@click.option("-a", "a", type=int, required=True)
@click.option("-b", "b", type=int, required=True)
@click.option("--window", default="box", help="box, gauss[:sigma], pc:c0,c1,..., rand[:seed], inline JSON, or @file")
@click.pass_obj
def gabor(cfg, L, a, b, window):
    """Full report for the system (window, a, b) on Z_L."""
    payload = {"L": L, "a": a, "b": b, "window": _window_arg(window), "tol": cfg.tol_spec()}
    resp = _call(cfg, "/gabor", payload)
    row = {
        "L": L,
        "a": a,
        "b": b,
        "A": resp["bounds"]["A"],
        "B": resp["bounds"]["B"],
        "A_cc": resp["cc"]["A_cc"],
        "B_cc": resp["cc"]["B_cc"],
        "is_frame": resp["is_frame"],
        "is_tight": resp["tight"]["tight_eigen"],
    }
    _emit(cfg, resp, [row])


@main.command()
@click.option("-L", "L", type=int, required=True)
@click.option("-a", "a", type=int, required=True)
@click.option("-b", "b", type=int, default=None, help="companion modulation step (default L/a)")
@click.option("--window", default="box")
@click.option("--normalized", is_flag=True, help="store the unitary scaling")
@click.pass_obj
def zak(cfg, L, a, b, window, normalized):
    """Zak transform of a window, with the critical spectrum when ab = L."""
    payload = {
        "L": L,
        "a": a,
        "b": b,
        "window": _window_arg(window),
        "normalized": normalized,
        "tol": cfg.tol_spec(),
    }
    resp = _call(cfg, "/zak", payload)
    rows = None
    if resp["critical"] is not None:
        rows = [
            {"index": k, "eigenvalue": v}
            for k, v in enumerate(resp["critical"]["eigenvalues"])
        ]
    _emit(cfg, resp, rows)


@main.command()
@click.option("-L", "L", type=int, required=True)
@click.option("-b", "b", type=int, required=True)
@click.option("--phi", required=True, help="delta, gauss[:sigma], pc:..., rand[:seed], inline JSON, or @file")
@click.pass_obj
def translates(cfg, L, b, phi):
    """Classify the b-step translates of phi on Z_L."""
    payload = {"L": L, "b": b, "phi": _window_arg(phi), "tol": cfg.tol_spec()}
    resp = _call(cfg, "/translates", payload)
    rows = [
        {"k": k, "p": p, "gram_eigenvalue": e}
        for k, (p, e) in enumerate(zip(resp["p"], resp["gram_eigenvalues"]))
    ]
    _emit(cfg, resp, rows)


@main.command()
@click.argument("frame_f")
@click.argument("frame_g")
@click.option("--lam1", type=float, default=0.1)
@click.option("--lam2", type=float, default=0.1)
@click.option("--mu", type=float, default=0.05)
@click.pass_obj
def perturb(cfg, frame_f, frame_g, lam1, lam2, mu):
    """Perturbation bounds between two frame files."""
    payload = {
        "frame_f": _load_doc(frame_f),
        "frame_g": _load_doc(frame_g),
        "lam1": lam1,
        "lam2": lam2,
        "mu": mu,
        "seed": cfg.seed,
        "tol": cfg.tol_spec(),
    }
    resp = _call(cfg, "/perturb", payload)
    rep = resp["report"]
    row = {
        "paley_wiener_lambda": rep["paley_wiener_lambda"],
        "analysis_bound": rep["analysis_bound"],
        "synthesis_bound": rep["synthesis_bound"],
        "g_is_frame": rep["g_is_frame"],
        "equivalent": rep["equivalent"],
        "gate_ok": rep["mixed"]["gate_ok"],
        "conclusion_verified": rep["mixed"]["conclusion_verified"],
    }
    _emit(cfg, resp, [row])


@main.command()
@click.argument("frame_file")
@click.option("--sections", default=None, help="semicolon-separated index lists, e.g. '0;0,1;0,1,2' (default: prefixes)")
@click.option("--probes", default=None, help="JSON file holding a list of vectors")
@click.option("--n-probes", type=int, default=0, help="extra seeded random probes")
@click.pass_obj
def projmethod(cfg, frame_file, sections, probes, n_probes):
    """Finite-section inverse growth and reconstruction errors."""
    sets = None
    if sections:
        if sections.startswith("["):
            try:
                sets = json.loads(sections)
            except json.JSONDecodeError as exc:
                _fail(f"malformed --sections: {exc}")
        else:
            try:
                sets = [
                    [int(x) for x in part.split(",") if x != ""]
                    for part in sections.split(";")
                ]
            except ValueError:
                _fail(f"malformed --sections: {sections!r}")
    payload = {
        "frame": _load_doc(frame_file),
        "index_sets": sets,
        "probes": _load_doc(probes) if probes else None,
        "n_probes": n_probes,
        "seed": cfg.seed,
        "tol": cfg.tol_spec(),
    }
    resp = _call(cfg, "/projmethod", payload)
    trace = resp["trace"]
    rows = [
        {"stage": m, "dim": dim, "inv_norm": iv}
        for m, (dim, iv) in enumerate(zip(trace["dims"], trace["inv_norms"]))
    ]
    _emit(cfg, resp, rows)


@main.command()
@click.option("-L", "L", type=int, required=True)
@click.option("--window", default="rand:0", help="lattice-free spec: gauss[:sigma], rand[:seed], delta, inline JSON, or @file")
@click.pass_obj
def scan(cfg, L, window):
    """Frame bounds for one window across every divisor pair (a, b)."""
    payload = {"L": L, "window": _window_arg(window), "tol": cfg.tol_spec()}
    resp = _call(cfg, "/scan", payload)
    fields = ["L", "a", "b", "redundancy", "is_frame", "A", "B", "is_tight"]
    _emit(cfg, resp, resp["rows"], fields)


@main.command()
@click.option("--sizes", required=True, help="comma-separated L values")
@click.option("-a", "a", type=int, required=True)
@click.option("-b", "b", type=int, required=True)
@click.option("--reps", type=int, default=50)
@click.pass_obj
def bench(cfg, sizes, a, b, reps):
    """Time the direct frame operator against its Walnut form."""
    try:
        size_list = [int(s) for s in sizes.split(",") if s]
    except ValueError:
        _fail(f"malformed --sizes: {sizes!r}")
    if not size_list:
        _fail("--sizes is empty")
    payload = {
        "sizes": size_list,
        "a": a,
        "b": b,
        "reps": reps,
        "seed": cfg.seed,
        "tol": cfg.tol_spec(),
    }
    resp = _call(cfg, "/bench", payload)
    fields = ["L", "a", "b", "direct_apply_ns", "walnut_apply_ns", "speedup", "max_rel_dev", "ok"]
    _emit(cfg, resp, resp["rows"], fields)
    if not resp["all_ok"]:
        raise SystemExit(3)


@main.command()
@click.option("--names", default=None, help="comma-separated check names (default: all)")
@click.option("--list", "list_only", is_flag=True, help="print check names without running")
@click.pass_obj
def suite(cfg, names, list_only):
    """Run the consolidated invariant checks."""
    if list_only:
        resp = _call(cfg, "/suite", {"list_only": True})
        _emit(cfg, resp["names"], [{"name": n} for n in resp["names"]])
        return
    payload = {
        "seed": cfg.seed,
        "names": [n for n in names.split(",") if n] if names else None,
        "tol": cfg.tol_spec(),
    }
    resp = _call(cfg, "/suite", payload)
    report = resp["report"]
    rows = [
        {"name": c["name"], "passed": c["passed"], "detail": c["detail"]}
        for c in report["checks"]
    ]
    _emit(cfg, report, rows)
    if not report["ok"]:
        raise SystemExit(1)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
