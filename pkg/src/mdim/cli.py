"""Command-line front end: a thin HTTP client for the service.

Every subcommand builds a JSON request, posts it to the service, and
writes the response to --out (or stdout). By default the service runs
in-process over an ASGI test transport, so no server is needed; pass
--server to talk to a remote instance instead. `mdim serve` starts one.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process transport against the ASGI app; same requests, no socket
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _fail_on_error(response) -> None:
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except Exception:
            detail = response.text
        raise click.ClickException(f"service returned {response.status_code}: {detail}")


def _write(ctx, text: str) -> None:
    out = ctx.obj.get("out")
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}", err=True)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _pretty(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False)


def _graph_source(graph_path, n, d, seed):
    if graph_path is not None:
        return {"edge_list": Path(graph_path).read_text(encoding="utf-8")}
    if n is None or d is None:
        raise click.UsageError("give --graph FILE or both --n and --d")
    return {"gnp": {"n": n, "d": d, "seed": seed}}


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; default runs in-process.")
@click.option("--seed", default=0, show_default=True, type=int, help="Master seed.")
@click.option("--out", default=None, type=click.Path(), help="Output file (default stdout).")
@click.option("--format", "fmt", default="json", show_default=True,
              type=click.Choice(["json", "csv", "svg", "summary-csv"]),
              help="Output format for sweep/validate results.")
@click.option("--gamma-threshold", default=8.0, show_default=True, type=float,
              help="Case-1/case-2 split on gamma.")
@click.option("--force-unit-alpha-beta", is_flag=True, default=False,
              help="Pin alpha = beta = 1 (dense-regime specialization).")
@click.pass_context
def main(ctx, server, seed, out, fmt, gamma_threshold, force_unit_alpha_beta):
    """Metric-dimension toolkit client."""
    ctx.ensure_object(dict)
    ctx.obj.update(
        server=server,
        seed=seed,
        out=out,
        fmt=fmt,
        gamma_threshold=gamma_threshold,
        force_unit_alpha_beta=force_unit_alpha_beta,
    )


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--d", required=True, type=float)
@click.pass_context
def gen(ctx, n, d):
    """Sample one G(n, d/n) instance and emit its edge list."""
    with _client(ctx.obj["server"]) as client:
        resp = client.post("/gen", json={"n": n, "d": d, "seed": ctx.obj["seed"]})
        _fail_on_error(resp)
        payload = resp.json()
    click.echo(
        f"n={payload['n']} m={payload['m']} connected={payload['connected']}",
        err=True,
    )
    _write(ctx, payload["edge_list"])


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--d", required=True, type=float)
@click.option("--diam", default=None, type=int, help="Known diameter for the integer bounds.")
@click.pass_context
def bounds(ctx, n, d, diam):
    """Regime parameters and all closed-form bound values."""
    body = {
        "n": n,
        "d": d,
        "diameter": diam,
        "gamma_threshold": ctx.obj["gamma_threshold"],
        "force_unit_alpha_beta": ctx.obj["force_unit_alpha_beta"],
    }
    with _client(ctx.obj["server"]) as client:
        resp = client.post("/bounds", json=body)
        _fail_on_error(resp)
        _write(ctx, _pretty(resp.json()))


@main.command()
@click.option("--graph", "graph_path", default=None, type=click.Path(exists=True),
              help="Edge-list file; alternative to --n/--d.")
@click.option("--n", default=None, type=int)
@click.option("--d", default=None, type=float)
@click.option("--per-vertex", is_flag=True, default=False,
              help="Include per-vertex entropies in the certificate.")
@click.pass_context
def certify(ctx, graph_path, n, d, per_vertex):
    """Entropic lower-bound certificate for a graph."""
    body = {
        "graph": _graph_source(graph_path, n, d, ctx.obj["seed"]),
        "include_per_vertex": per_vertex,
    }
    with _client(ctx.obj["server"]) as client:
        resp = client.post("/certify", json=body)
        _fail_on_error(resp)
        _write(ctx, _pretty(resp.json()))


@main.command()
@click.option("--graph", "graph_path", default=None, type=click.Path(exists=True))
@click.option("--n", default=None, type=int)
@click.option("--d", default=None, type=float)
@click.option("--max-retries", default=32, show_default=True, type=int)
@click.option("--pair-budget", default=200_000, show_default=True, type=int)
@click.option("--sample-pairs", default=10_000, show_default=True, type=int)
@click.pass_context
def construct(ctx, graph_path, n, d, max_retries, pair_budget, sample_pairs):
    """Randomized landmark construction with verification."""
    body = {
        "graph": _graph_source(graph_path, n, d, ctx.obj["seed"]),
        "seed": ctx.obj["seed"],
        "max_retries": max_retries,
        "pair_budget": pair_budget,
        "sample_pairs": sample_pairs,
    }
    with _client(ctx.obj["server"]) as client:
        resp = client.post("/construct", json=body)
        _fail_on_error(resp)
        _write(ctx, _pretty(resp.json()))


@main.command()
@click.option("--graph", "graph_path", default=None, type=click.Path(exists=True))
@click.option("--n", default=None, type=int)
@click.option("--d", default=None, type=float)
@click.option("--budget", default=100_000_000, show_default=True, type=int)
@click.pass_context
def exact(ctx, graph_path, n, d, budget):
    """Exact metric dimension by pruned subset search (small graphs)."""
    body = {
        "graph": _graph_source(graph_path, n, d, ctx.obj["seed"]),
        "budget": budget,
    }
    with _client(ctx.obj["server"]) as client:
        resp = client.post("/exact", json=body)
        _fail_on_error(resp)
        _write(ctx, _pretty(resp.json()))


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path(exists=True),
              help="Flat key=value config file; flags override it.")
@click.option("--n-values", default=None, help="Comma-separated vertex counts.")
@click.option("--c-values", default=None, help="Comma-separated degree coefficients c (d = c ln n).")
@click.option("--d-values", default=None, help="Comma-separated mean degrees.")
@click.option("--trials", default=None, type=int)
@click.option("--workers", default=None, type=int)
@click.option("--modes", default=None, help="Comma-separated subset of bounds,certify,construct,exact,validate.")
@click.pass_context
def sweep(ctx, config_path, n_values, c_values, d_values, trials, workers, modes):
    """Seeded Monte-Carlo sweep over an (n, degree) grid."""
    from .harness import parse_config_text

    mapping: dict = {}
    if config_path:
        mapping.update(parse_config_text(Path(config_path).read_text(encoding="utf-8")))
    overrides = {
        "n_values": n_values,
        "c_values": c_values,
        "d_values": d_values,
        "trials": trials,
        "workers": workers,
        "modes": modes,
    }
    mapping.update({k: v for k, v in overrides.items() if v is not None})
    mapping.setdefault("master_seed", ctx.obj["seed"])
    mapping.setdefault("gamma_threshold", ctx.obj["gamma_threshold"])
    if ctx.obj["force_unit_alpha_beta"]:
        mapping["force_unit_alpha_beta"] = True
    try:
        body = _sweep_body(mapping)
    except Exception as err:
        raise click.ClickException(f"invalid sweep configuration: {err}")
    fmt = ctx.obj["fmt"]
    with _client(ctx.obj["server"]) as client:
        resp = client.post("/sweep", params={"format": fmt}, json=body)
        _fail_on_error(resp)
        _write(ctx, _pretty(resp.json()) if fmt == "json" else resp.text)


def _sweep_body(mapping: dict) -> dict:
    """Convert flat config strings into the sweep request schema."""
    from .harness import ExperimentConfig

    cfg = ExperimentConfig.from_mapping(mapping)
    body = {
        "n_values": list(cfg.n_values),
        "trials": cfg.trials,
        "master_seed": cfg.master_seed,
        "modes": sorted(cfg.modes),
        "workers": cfg.workers,
        "gamma_threshold": cfg.gamma_threshold,
        "force_unit_alpha_beta": cfg.force_unit_alpha_beta,
        "shell_ratio_window": list(cfg.shell_ratio_window),
        "shell_fraction_slack": cfg.shell_fraction_slack,
        "degree_window_factors": list(cfg.degree_window_factors),
        "sym_diff_ratio_window": list(cfg.sym_diff_ratio_window),
        "sym_diff_pair_sample": cfg.sym_diff_pair_sample,
        "sigma_pair_budget": cfg.sigma_pair_budget,
        "sigma_sample_pairs": cfg.sigma_sample_pairs,
        "construct_max_retries": cfg.construct_max_retries,
        "exact_budget": cfg.exact_budget,
        "exact_n_limit": cfg.exact_n_limit,
    }
    if cfg.c_values is not None:
        body["c_values"] = list(cfg.c_values)
    else:
        body["d_values"] = list(cfg.d_values)
    return body


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--d", default=None, type=float)
@click.option("--c", default=None, type=float)
@click.option("--trials", default=1, show_default=True, type=int)
@click.pass_context
def validate(ctx, n, d, c, trials):
    """Empirical validation of shell/degree predictions on generated instances."""
    body = {
        "n": n,
        "d": d,
        "c": c,
        "trials": trials,
        "master_seed": ctx.obj["seed"],
        "gamma_threshold": ctx.obj["gamma_threshold"],
        "force_unit_alpha_beta": ctx.obj["force_unit_alpha_beta"],
    }
    with _client(ctx.obj["server"]) as client:
        resp = client.post("/validate", json=body)
        _fail_on_error(resp)
        _write(ctx, _pretty(resp.json()))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("mdim.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
