"""Random greedy intersecting hypergraph process: exact counts, functionals and trials."""

import json

from ._ekrf import (
    CapExceeded,
    ProcessState,
    TrialError,
    final_family_size,
    graph_sum_class,
    graph_sum_f1,
    grid_bound_nhul,
    grid_leading,
    grid_sum,
    law_value,
    matching_count,
    nu_all,
    nu_emp,
    nu_emp_AB,
    nu_G,
    nu_split,
    regime_warnings,
)

__all__ = [
    "CapExceeded",
    "ProcessState",
    "TrialError",
    "final_family_size",
    "graph_sum_class",
    "graph_sum_f1",
    "grid_bound_nhul",
    "grid_leading",
    "grid_sum",
    "law_value",
    "matching_count",
    "nu_all",
    "nu_emp",
    "nu_emp_AB",
    "nu_G",
    "nu_split",
    "regime_warnings",
    "run_trial",
    "run_trials",
    "summarize",
]

_DEFAULTS = dict(
    mode="structural",
    strategy="auto",
    ie_cap=22,
    t_max=10_000_000,
    delta_stop=0,
    eps_fix=1e-6,
    continue_after_verdict=True,
)


def _options(kwargs):
    unknown = set(kwargs) - set(_DEFAULTS)
    if unknown:
        raise TypeError(f"unknown options: {sorted(unknown)}")
    return {**_DEFAULTS, **kwargs}


def run_trial(n, r, seed, **options):
    """One trial; returns the JSONL record as a dict."""
    from ._ekrf import _run_trial_json

    return json.loads(_run_trial_json(n, r, seed, **_options(options)))


def run_trials(n, r, trials, seed_base=0, workers=1, **options):
    """Independent trials in trial-index order; trial i uses seed_base ^ mix64(i)."""
    from ._ekrf import _run_trials_jsonl

    text = _run_trials_jsonl(n, r, trials, seed_base, workers, **_options(options))
    return [json.loads(line) for line in text.splitlines() if line]


def summarize(records, alphas=(1.0, 1.5), cs=(1.0, 1.5), xis=(1.0,), scaled_x=1.0):
    """Phase statistics and law comparisons for records from run_trials."""
    from ._ekrf import _summarize_json

    text = "".join(json.dumps(rec) + "\n" for rec in records)
    return json.loads(_summarize_json(text, list(alphas), list(cs), list(xis), scaled_x))["summary"]
