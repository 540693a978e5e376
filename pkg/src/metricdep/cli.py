"""Command-line interface over files.

Subcommands
-----------
compute   one statistic from a paired-sample CSV
test      permutation independence test from a paired-sample CSV
oracle    exact measures (and Mercer decompositions) of a joint-law JSON
scenario  power/level study or the norm-distribution check
validate  Schoenberg negative-type check of a distance-matrix CSV

Exit codes: 0 success; 1 a validate run whose matrix is not of negative
type; 2 malformed input or usage.  Primary output is a deterministic JSON
document (or an appended CSV row for scenario --format csv): identical
configuration and seed give byte-identical output.
"""

from __future__ import annotations

import csv
import json
import os
import sys

import click

from . import estimators, io, oracle, scenarios
from .kernels import (
    InputError,
    EuclideanSquared,
    GaussianKernel,
    induced_kernel,
    induced_semimetric,
    parse_anchor,
    parse_kernel,
    parse_semimetric,
    resolve_bandwidth,
    validate_negative_type,
)

_CLI_ESTIMATORS = {
    "mcov": "mcov",
    "mcov-trace": "mcov_trace",
    "hsic": "hsic",
    "dcov": "dcov",
}


def _fail(message, code=2):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(text, output):
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w") as handle:
            handle.write(text)


def _resolve_specs(estimator, kernel_spec, metric_spec, anchor_spec):
    """Turn --kernel/--metric/--anchor strings into the objects the chosen
    estimator needs, converting through the induced kernel/semimetric when
    only the other side was given."""
    kernel = parse_kernel(kernel_spec) if kernel_spec else None
    metric = parse_semimetric(metric_spec) if metric_spec else None
    anchor = parse_anchor(anchor_spec) if anchor_spec else None
    if estimator in ("mcov", "dcov"):
        if metric is None:
            metric = induced_semimetric(kernel) if kernel is not None else EuclideanSquared()
        label = metric.spec
        return None, metric, label
    if kernel is None:
        kernel = induced_kernel(metric, anchor) if metric is not None else GaussianKernel()
    return kernel, None, kernel.spec


def _load_sample(path):
    try:
        return io.read_paired_sample(path)
    except OSError as err:
        _fail(err)
    except InputError as err:
        _fail(err)


@click.group()
@click.version_option(package_name="metricdep")
def main():
    """Dependence measures on (semi)metric spaces of negative type.

    Kernel specs: linear | gaussian[:sigma=S] | matern:nu=N[,ell=L] |
    induced_kernel:base=METRIC[,anchor=origin|(v1;v2;...)].
    Metric specs: euclid2 | induced_metric:base=(KERNEL).
    A gaussian without sigma uses the median heuristic on the pooled sample.
    """


_estimator_option = click.option(
    "--estimator",
    type=click.Choice(sorted(_CLI_ESTIMATORS)),
    required=True,
    help="Which statistic to compute.",
)
_kernel_option = click.option("--kernel", "kernel_spec", default=None, help="Kernel spec string.")
_metric_option = click.option("--metric", "metric_spec", default=None, help="Semimetric spec string.")
_anchor_option = click.option(
    "--anchor", "anchor_spec", default=None, help="Anchor for induced kernels: origin or (v1;v2;...)."
)
_output_option = click.option("--output", default=None, type=click.Path(), help="Write the document here instead of stdout.")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(), help="Paired-sample CSV (header x_1..x_p,y_1..y_q).")
@_estimator_option
@_kernel_option
@_metric_option
@_anchor_option
@_output_option
def compute(input_path, estimator, kernel_spec, metric_spec, anchor_spec, output):
    """Compute one dependence statistic from a paired-sample CSV."""
    x, y = _load_sample(input_path)
    name = _CLI_ESTIMATORS[estimator]
    try:
        kernel, metric, label = _resolve_specs(name, kernel_spec, metric_spec, anchor_spec)
        if name == "mcov":
            value = estimators.mcov_plugin(x, y, metric)
        elif name == "mcov_trace":
            value = estimators.mcov_trace(x, y, kernel)
        elif name == "hsic":
            value = estimators.hsic_vstat(x, y, kernel)
        else:
            value = estimators.dcov_vstat(x, y, metric)
    except InputError as err:
        _fail(err)
    doc = {
        "estimator": estimator,
        "kernel_or_metric": label,
        "n": int(x.shape[0]),
        "statistic": float(value),
    }
    _emit(io.render_json(doc), output)


@main.command("test")
@click.option("--input", "input_path", required=True, type=click.Path(), help="Paired-sample CSV (header x_1..x_p,y_1..y_q).")
@_estimator_option
@_kernel_option
@_metric_option
@_anchor_option
@click.option("--B", "b", default=999, show_default=True, help="Number of permutations.")
@click.option("--seed", default=0, show_default=True, help="Master seed for the permutation streams.")
@click.option(
    "--alternative",
    type=click.Choice(["two-sided", "greater"]),
    default=None,
    help="Default: two-sided for mcov/mcov-trace, greater for hsic/dcov.",
)
@_output_option
def test_command(input_path, estimator, kernel_spec, metric_spec, anchor_spec, b, seed, alternative, output):
    """Permutation independence test from a paired-sample CSV."""
    x, y = _load_sample(input_path)
    name = _CLI_ESTIMATORS[estimator]
    try:
        kernel, metric, label = _resolve_specs(name, kernel_spec, metric_spec, anchor_spec)
        result = estimators.permutation_test(
            x,
            y,
            name,
            metric=metric,
            kernel=kernel,
            B=b,
            seed=seed,
            alternative=alternative.replace("-", "_") if alternative else None,
        )
    except InputError as err:
        _fail(err)
    doc = result.to_dict()
    doc["estimator"] = estimator
    doc["kernel_or_metric"] = label
    _emit(io.render_json(doc), output)


@main.command("oracle")
@click.option("--input", "input_path", required=True, type=click.Path(), help='Joint law JSON {"support_x", "support_y", "P"}.')
@_kernel_option
@_metric_option
@_anchor_option
@click.option("--decompose", is_flag=True, help="Include Mercer decompositions (same-space joints).")
@_output_option
def oracle_command(input_path, kernel_spec, metric_spec, anchor_spec, decompose, output):
    """Exact dependence measures of a finite-support joint law.

    Emits mcov (when the supports share a space), hsic and dcov.  With
    --decompose, adds the per-eigenfunction terms of both Mercer sums, whose
    signs show whether metric covariance loses dependence to cancellation.
    """
    try:
        joint = io.read_discrete_joint(input_path)
    except (OSError, InputError) as err:
        _fail(err)
    same_space = joint.support_x.shape[1] == joint.support_y.shape[1]
    try:
        kernel = parse_kernel(kernel_spec) if kernel_spec else None
        metric = parse_semimetric(metric_spec) if metric_spec else None
        anchor = parse_anchor(anchor_spec) if anchor_spec else None
        if kernel is None and metric is None:
            kernel = GaussianKernel()
        if kernel is None:
            kernel = induced_kernel(metric, anchor)
        if metric is None:
            metric = induced_semimetric(kernel)
        pool = (
            (joint.support_x, joint.support_y) if same_space else (joint.support_x,)
        )
        kernel = resolve_bandwidth(kernel, *pool)
        metric = resolve_bandwidth(metric, *pool)

        doc = {
            "kernel": kernel.spec,
            "metric": metric.spec,
            "hsic": oracle.exact_hsic(joint, kernel),
            "dcov": oracle.exact_dcov(joint, metric),
        }
        if same_space:
            doc["mcov"] = oracle.exact_mcov(joint, metric)
        if decompose:
            if not same_space:
                raise InputError("Mercer decompositions need supports in a common space")
            mdec = oracle.mercer_mcov_decomposition(joint, kernel)
            hdec = oracle.mercer_hsic_decomposition(joint, kernel)
            doc["mcov_decomposition"] = {
                "total": mdec.total,
                "eigenvalues": mdec.eigenvalues,
                "covariances": mdec.covariances,
                "terms": mdec.terms,
            }
            doc["hsic_decomposition"] = {
                "total": hdec.total,
                "eigenvalues": hdec.eigenvalues,
                "terms": hdec.terms,
            }
    except InputError as err:
        _fail(err)
    _emit(io.render_json(doc), output)


@main.command("scenario")
@click.option("--config", "config_path", default=None, type=click.Path(), help="JSON or TOML file whose keys override the flags.")
@click.option("--scenario", "scenario_name", default=None, type=click.Choice(sorted(scenarios.SCENARIOS)))
@click.option("--study", type=click.Choice(["power", "norms"]), default="power", show_default=True)
@click.option("--estimator", type=click.Choice(sorted(_CLI_ESTIMATORS)), default="hsic", show_default=True)
@_kernel_option
@_metric_option
@click.option("--n", default=200, show_default=True, help="Sample size per replication.")
@click.option("--sigma", default=0.5, show_default=True, help="Mixture noise scale (coupled_mixture).")
@click.option("--alpha", default=0.05, show_default=True, help="Test level.")
@click.option("--reps", default=200, show_default=True, help="Number of replications.")
@click.option("--B", "b", default=199, show_default=True, help="Permutations per test.")
@click.option("--seed", default=0, show_default=True, help="Master seed.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@_output_option
def scenario_command(config_path, scenario_name, study, estimator, kernel_spec, metric_spec, n, sigma, alpha, reps, b, seed, fmt, output):
    """Run a Monte Carlo power/level study or the norm-distribution check."""
    settings = {
        "scenario": scenario_name,
        "study": study,
        "estimator": estimator,
        "kernel": kernel_spec,
        "metric": metric_spec,
        "n": n,
        "sigma": sigma,
        "alpha": alpha,
        "reps": reps,
        "B": b,
        "seed": seed,
    }
    if config_path is not None:
        try:
            settings.update(_read_config(config_path))
        except (OSError, InputError) as err:
            _fail(err)
    if settings["scenario"] is None:
        _fail("a scenario name is required (flag --scenario or config key 'scenario')")
    try:
        if settings["study"] == "norms":
            result = scenarios.norm_distribution_check(
                n=int(settings["n"]),
                sigma=float(settings["sigma"]),
                seed=int(settings["seed"]),
            )
            _emit(io.render_json(result.__dict__), output)
            return
        kernel = parse_kernel(settings["kernel"]) if settings["kernel"] else None
        metric = parse_semimetric(settings["metric"]) if settings["metric"] else None
        report = scenarios.power_study(
            settings["scenario"],
            _CLI_ESTIMATORS[settings["estimator"]],
            int(settings["n"]),
            alpha=float(settings["alpha"]),
            reps=int(settings["reps"]),
            B=int(settings["B"]),
            seed=int(settings["seed"]),
            sigma=float(settings["sigma"]),
            kernel=kernel,
            metric=metric,
        )
    except InputError as err:
        _fail(err)
    if fmt == "json":
        _emit(io.render_json(report.to_dict()), output)
    else:
        _append_csv(report, output)


def _read_config(path):
    with open(path, "rb") as handle:
        raw = handle.read()
    if str(path).endswith(".toml"):
        import tomllib

        try:
            return tomllib.loads(raw.decode())
        except tomllib.TOMLDecodeError as err:
            raise InputError(f"{path}: {err}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: {err}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: config must be a JSON object")
    return doc


def _append_csv(report, output):
    if output is None:
        click.echo(",".join(scenarios.PowerReport.CSV_FIELDS))
        click.echo(",".join(str(v) for v in report.csv_row()))
        return
    fresh = not os.path.exists(output) or os.path.getsize(output) == 0
    with open(output, "a", newline="") as handle:
        writer = csv.writer(handle)
        if fresh:
            writer.writerow(scenarios.PowerReport.CSV_FIELDS)
        writer.writerow(report.csv_row())


@main.command("validate")
@click.option("--input", "input_path", required=True, type=click.Path(), help="Square distance-matrix CSV, no header.")
@click.option("--tol", default=1e-8, show_default=True, help="Relative eigenvalue tolerance.")
@_output_option
def validate_command(input_path, tol, output):
    """Check a distance matrix for negative type (Schoenberg condition).

    Exit 0 when valid, 1 when the matrix is not of negative type, 2 on
    malformed input.
    """
    try:
        matrix = io.read_square_matrix(input_path)
        report = validate_negative_type(matrix, tol=tol)
    except (OSError, InputError) as err:
        _fail(err)
    doc = {
        "n": int(matrix.shape[0]),
        "tol": tol,
        "valid": bool(report.valid),
        "worst_eigenvalue": report.worst_eigenvalue,
    }
    _emit(io.render_json(doc), output)
    if not report.valid:
        sys.exit(1)


if __name__ == "__main__":
    main()
