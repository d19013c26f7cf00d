"""Config-driven command line front end.

Usage: ``oamic <scenario> --config cfg.json [--out path] [--seed N]
[--format json|csv]``. The config is a single JSON document::

    {"scenario": "werner",        # optional, must match the subcommand
     "seed": 7,                   # optional PRNG seed
     "out": "results.json",       # optional output path
     "params": { ... }}           # scenario-specific block

Complex numbers are serialized as [re, im] pairs; density matrices as a
flat row-major list of such pairs plus an explicit mode-label list, so
basis ordering is never implicit. Unknown keys anywhere are rejected.

Exit codes: 0 success, 2 config parse error, 3 parameter validation
error, 4 numerical failure (ill-posed retrieval and friends). Errors are
reported as JSON on stderr; output files are only written on success.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .analysis import IntensityRecord, analyze_intensities, fits_to_csv, read_intensity_csv
from .channels import SpilloverSpec, apply_channel, build_flip_channel, build_ic_channel, embed_state
from .codes import (
    build_correction_code,
    build_rejection_code,
    codeword_vector,
    correct,
    encode,
    error_operator,
    rejection_distribution,
    syndrome_distribution,
    transmit,
)
from .errors import (
    ConfigError,
    IllConditionedError,
    IllPosedError,
    OamicError,
    SingularSystemError,
)
from .invariants import (
    tan_phase_invariant,
    three_qubit_invariants,
    three_qubit_retrieval_invariants,
    werner_ratio_invariants,
)
from .kernels import BACKEND
from .linalg import DensityMatrix, ModeBasis, pure_state_fidelity
from .retrieval import (
    RetrievalProblem,
    minimum_dimension,
    recover_three_qubit_params,
    recover_two_qubit_gamma,
    recover_werner_phi,
    retrieve_full_state,
)
from .turbulence import (
    ThreeQubitParams,
    TwoQubitParams,
    WernerParams,
    three_qubit_output,
    two_qubit_output,
    werner_initial,
    werner_output,
)

SCENARIOS = (
    "ic-sim", "flip-sim", "werner", "two-qubit", "three-qubit",
    "retrieve", "qerc", "qecc", "analyze",
)

EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4

_NUMERICAL_ERRORS = (IllPosedError, SingularSystemError, IllConditionedError)


# ---------------------------------------------------------------------------
# JSON (de)serialization


def _check_keys(obj, required, optional, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    keys = set(obj)
    missing = set(required) - keys
    unknown = keys - set(required) - set(optional)
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


def _complex_from_json(pair, where):
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise ConfigError(f"{where}: complex numbers are [re, im] pairs, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def _state_from_json(obj, where):
    _check_keys(obj, ("modes", "matrix"), (), where)
    modes = obj["modes"]
    entries = obj["matrix"]
    n = len(modes)
    if len(entries) != n * n:
        raise ConfigError(f"{where}: expected {n * n} row-major entries, got {len(entries)}")
    flat = [_complex_from_json(e, where) for e in entries]
    mat = np.array(flat, dtype=np.complex128).reshape(n, n)
    return DensityMatrix(ModeBasis(tuple(modes)), mat)


def _state_to_json(rho: DensityMatrix):
    return {
        "modes": list(rho.basis.labels),
        "matrix": [_complex_to_json(z) for z in rho.mat.ravel()],
    }


def _invariant_to_json(inv):
    return {
        "value": _complex_to_json(inv.value) if inv.well_conditioned else None,
        "denominator_magnitude": inv.denominator_magnitude,
        "well_conditioned": inv.well_conditioned,
    }


def _spec_from(params):
    return SpilloverSpec(int(params["max_spill"]), tuple(params["probs"]))


# ---------------------------------------------------------------------------
# Scenario handlers (each returns the results block)


def _run_ic_sim(params, seed):
    _check_keys(params, ("l_min", "l_max", "max_spill", "probs", "state"), (), "params")
    channel = build_ic_channel(int(params["l_min"]), int(params["l_max"]), _spec_from(params))
    rho = _state_from_json(params["state"], "params.state")
    return {"output_state": _state_to_json(apply_channel(channel, rho))}


def _run_flip_sim(params, seed):
    _check_keys(params, ("dim", "max_spill", "probs", "state"), (), "params")
    channel = build_flip_channel(int(params["dim"]), _spec_from(params))
    rho = _state_from_json(params["state"], "params.state")
    return {"output_state": _state_to_json(apply_channel(channel, rho))}


def _maybe_tan_phase(rho, i, j):
    try:
        return _invariant_to_json(tan_phase_invariant(rho, i, j))
    except IllConditionedError:
        return {"value": None, "denominator_magnitude": 0.0, "well_conditioned": False}


def _run_werner(params, seed):
    _check_keys(params, ("gamma_purity", "theta", "phi", "mu", "nu"), (), "params")
    p = WernerParams(**{k: float(v) for k, v in params.items()})
    rho0 = werner_initial(p)
    rho = werner_output(p)
    ratios = werner_ratio_invariants(rho)
    return {
        "initial_state": _state_to_json(rho0),
        "output_state": _state_to_json(rho),
        "tan_phase_invariant": _maybe_tan_phase(rho, 1, 2),
        "ratio_invariants": [_invariant_to_json(v) for v in ratios],
        "recovered_phi": recover_werner_phi(rho),
    }


def _run_two_qubit(params, seed):
    _check_keys(params, ("a", "b", "gamma_phase"), (), "params")
    p = TwoQubitParams(**{k: float(v) for k, v in params.items()})
    rho = two_qubit_output(p)
    return {
        "output_state": _state_to_json(rho),
        "tan_phase_invariant": _maybe_tan_phase(rho, 1, 2),
        "recovered_gamma": recover_two_qubit_gamma(rho),
    }


def _run_three_qubit(params, seed):
    _check_keys(params, ("alphas", "a", "b"), (), "params")
    alphas = tuple(_complex_from_json(a, "params.alphas") for a in params["alphas"])
    p = ThreeQubitParams(alphas, float(params["a"]), float(params["b"]))
    rho = three_qubit_output(p)
    return {
        "output_state": _state_to_json(rho),
        "invariants": [_invariant_to_json(v) for v in three_qubit_invariants(rho)],
        "retrieval_invariants": [
            _invariant_to_json(v) for v in three_qubit_retrieval_invariants(rho)
        ],
        "recovered_alphas": [_complex_to_json(a) for a in recover_three_qubit_params(rho)],
    }


def _run_retrieve(params, seed):
    _check_keys(
        params, ("max_spill",), ("probs", "state", "rho_out", "n_modes", "embed_offset"),
        "params",
    )
    spill = int(params["max_spill"])
    if ("state" in params) == ("rho_out" in params):
        raise ConfigError("params: provide exactly one of 'state' or 'rho_out'")

    if "state" in params:
        if "probs" not in params:
            raise ConfigError("params: 'state' form needs channel 'probs'")
        rho_in = _state_from_json(params["state"], "params.state")
        labels = rho_in.basis.labels
        if labels != tuple(range(labels[0], labels[-1] + 1)):
            raise ConfigError("params.state: modes must be contiguous for retrieval")
        m = len(labels)
        spec = SpilloverSpec(spill, tuple(params["probs"]))
        channel = build_ic_channel(labels[0], labels[-1], spec)
        rho_ch = apply_channel(channel, rho_in)
        dim = minimum_dimension(m, spill)
        rho_out = embed_state(rho_ch, dim, 0) if rho_ch.dim < dim else rho_ch
        rho_out = DensityMatrix(ModeBasis.contiguous(0, dim - 1), rho_out.mat)
        problem = RetrievalProblem(m, spill, rho_out)
        result = retrieve_full_state(problem)
        reconstructed = DensityMatrix(rho_in.basis, result.rho.mat)
        return {
            "reconstructed_state": _state_to_json(reconstructed),
            "residuals": result.residuals,
            "max_abs_error": float(np.abs(reconstructed.mat - rho_in.mat).max()),
        }

    if "n_modes" not in params:
        raise ConfigError("params: 'rho_out' form needs 'n_modes'")
    rho_out = _state_from_json(params["rho_out"], "params.rho_out")
    problem = RetrievalProblem(
        int(params["n_modes"]), spill, rho_out,
        int(params.get("embed_offset", -1)),
    )
    result = retrieve_full_state(problem)
    return {
        "reconstructed_state": _state_to_json(result.rho),
        "residuals": result.residuals,
    }


def _distribution_json(table):
    return [
        {"outcome": tag, "probability": prob}
        for tag, prob, _ in table
    ]


def _run_qerc(params, seed):
    _check_keys(params, ("n_logical", "max_spill", "logical"), ("probs",), "params")
    code = build_rejection_code(int(params["n_logical"]), int(params["max_spill"]))
    amps = [_complex_from_json(a, "params.logical") for a in params["logical"]]
    clean = encode(code, amps)
    psi = codeword_vector(code, amps)

    corrupted = []
    for k in range(1, code.max_spill + 1):
        for shift in (k, -k):
            err = error_operator(code, shift) @ psi
            rho_err = DensityMatrix(code.ambient_basis, np.outer(err, err.conj()))
            table = rejection_distribution(code, rho_err)
            corrupted.append({"shift": shift, "outcomes": _distribution_json(table)})

    results = {
        "code_modes": list(code.code_modes),
        "clean": _distribution_json(rejection_distribution(code, clean)),
        "corrupted": corrupted,
    }
    if "probs" in params:
        spec = SpilloverSpec(code.max_spill, tuple(params["probs"]))
        results["channel"] = _distribution_json(
            rejection_distribution(code, transmit(code, spec, clean))
        )
    return results


def _syndrome_label(shift):
    return "c0" if shift == 0 else f"c{shift:+d}"


def _run_qecc(params, seed):
    _check_keys(params, ("n_logical", "max_spill", "logical"), ("probs", "shots"), "params")
    code = build_correction_code(int(params["n_logical"]), int(params["max_spill"]))
    amps = [_complex_from_json(a, "params.logical") for a in params["logical"]]
    clean = encode(code, amps)
    psi = codeword_vector(code, amps)

    if "probs" in params:
        spec = SpilloverSpec(code.max_spill, tuple(params["probs"]))
        received = transmit(code, spec, clean)
    else:
        received = clean

    rows = []
    for shift, prob, post in syndrome_distribution(code, received):
        fixed = correct(code, shift, post)
        rows.append(
            {
                "outcome": _syndrome_label(shift),
                "shift": shift,
                "probability": prob,
                "fidelity_after_correction": pure_state_fidelity(fixed, psi),
            }
        )
    results = {"code_modes": list(code.code_modes), "syndromes": rows}

    if "shots" in params:
        rng = np.random.default_rng(seed)
        shifts = [r["shift"] for r in rows]
        probs = np.array([r["probability"] for r in rows])
        draws = rng.choice(len(shifts), size=int(params["shots"]), p=probs / probs.sum())
        counts = {_syndrome_label(shifts[i]): 0 for i in range(len(shifts))}
        for d in draws:
            counts[_syndrome_label(shifts[d])] += 1
        results["shot_counts"] = counts
    return results


def _run_analyze(params, seed):
    _check_keys(params, (), ("csv", "records"), "params")
    if ("csv" in params) == ("records" in params):
        raise ConfigError("params: provide exactly one of 'csv' or 'records'")
    if "csv" in params:
        try:
            with open(params["csv"], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read csv file: {exc}") from exc
        records = read_intensity_csv(text)
    else:
        records = []
        for row in params["records"]:
            _check_keys(
                row, ("initial_mode", "delta_ell", "relative_intensity"), (), "record"
            )
            records.append(
                IntensityRecord(
                    int(row["initial_mode"]),
                    int(row["delta_ell"]),
                    float(row["relative_intensity"]),
                )
            )
    fits = analyze_intensities(records)
    return {
        "groups": [
            {
                "delta_ell": f.delta_ell,
                "slope": f.slope,
                "relative_change": f.relative_change,
                "n_points": f.n_points,
            }
            for f in fits
        ]
    }


_HANDLERS = {
    "ic-sim": _run_ic_sim,
    "flip-sim": _run_flip_sim,
    "werner": _run_werner,
    "two-qubit": _run_two_qubit,
    "three-qubit": _run_three_qubit,
    "retrieve": _run_retrieve,
    "qerc": _run_qerc,
    "qecc": _run_qecc,
    "analyze": _run_analyze,
}


# ---------------------------------------------------------------------------
# Runner


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    _check_keys(raw, ("params",), ("scenario", "seed", "out"), "config")
    return raw


def run(scenario, config, seed=None):
    """Execute one scenario; returns the full output document."""
    if scenario not in _HANDLERS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    declared = config.get("scenario")
    if declared is not None and declared != scenario:
        raise ConfigError(f"config declares scenario {declared!r}, command says {scenario!r}")
    if seed is None:
        seed = config.get("seed")
    if seed is not None and (not isinstance(seed, int) or seed < 0):
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")

    results = _HANDLERS[scenario](config["params"], seed)
    return {
        "metadata": {
            "tool": "oamic",
            "version": __version__,
            "kernel_backend": BACKEND,
            "scenario": scenario,
            "seed": seed,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        },
        "inputs_echo": {"scenario": scenario, "seed": seed, "params": config["params"]},
        "results": results,
    }


def _emit(document, scenario, out_path, fmt):
    if fmt == "csv":
        if scenario != "analyze":
            raise ConfigError("--format csv is only available for the analyze scenario")
        from .analysis import GroupFit

        fits = [
            GroupFit(g["delta_ell"], g["slope"], g["relative_change"], g["n_points"])
            for g in document["results"]["groups"]
        ]
        text = fits_to_csv(fits)
    else:
        text = json.dumps(document, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="oamic",
        description="Crosstalk-channel simulation, invariants, retrieval, and codes.",
    )
    parser.add_argument("--version", action="version", version=f"oamic {__version__}")
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--seed", type=int, default=None, help="PRNG seed (overrides config)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        out_path = args.out if args.out is not None else config.get("out")
        document = run(args.scenario, config, seed=args.seed)
        _emit(document, args.scenario, out_path, args.format)
    except ConfigError as exc:
        _report_error(exc)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        _report_error(exc)
        return EXIT_NUMERICAL
    except (OamicError, ValueError, KeyError, TypeError) as exc:
        _report_error(exc)
        return EXIT_VALIDATION
    return 0


def _report_error(exc):
    sys.stderr.write(
        json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}) + "\n"
    )


if __name__ == "__main__":
    sys.exit(main())
