"""Donor-acceptor transfer in the two-level Wigner-Weisskopf model.

Models are described by the same JSON blocks the ``wwt`` command reads; this package
accepts them as dictionaries.
"""

import json

try:
    from . import _wwt
except ImportError:  # build tree: the extension sits on sys.path next to the package
    import _wwt

__version__ = _wwt.__version__

SchemaError = _wwt.SchemaError
ModelError = _wwt.ModelError
NumericalError = _wwt.NumericalError

decay_rate = _wwt.decay_rate
radiative_shift = _wwt.radiative_shift
transfer_bound = _wwt.transfer_bound
markov_peak_time = _wwt.markov_peak_time
amplitude_exact = _wwt.amplitude_exact
amplitude_markov = _wwt.amplitude_markov
amplitude_oracle = _wwt.amplitude_oracle
network_amplitude = _wwt.network_amplitude


def continuum(model):
    """ContinuumModel from a model block, e.g. ``{"omega1": 1.0, "band": [0, 20], ...}``."""
    block = dict(model)
    block.setdefault("type", "continuum")
    return _wwt.ContinuumModel(json.dumps(block))


def network(doc):
    """Network from ``{"sites": [...], "hoppings": [{"from", "to", "amplitude"}, ...]}``."""
    return _wwt.Network(json.dumps(doc))


def optimal_transfer_time(model):
    return json.loads(_wwt.optimal_transfer_time(model))


def apet_report(model):
    return json.loads(_wwt.apet_report(model))


def embed_network(net, eta):
    """Embedding report and a scenario config for the envelope model."""
    out = json.loads(_wwt.embed_network(net, eta))
    return out["report"], out["model"]


def run_scenario(config, base_dir="."):
    """Runs a scenario config. Returns (exit_code, output_dir, summary)."""
    code, out_dir, summary = _wwt.run_scenario(json.dumps(config), str(base_dir))
    return code, out_dir, json.loads(summary)


__all__ = [
    "SchemaError", "ModelError", "NumericalError", "continuum", "network", "decay_rate",
    "radiative_shift", "transfer_bound", "markov_peak_time", "optimal_transfer_time",
    "apet_report", "amplitude_exact", "amplitude_markov", "amplitude_oracle",
    "network_amplitude", "embed_network", "run_scenario",
]
