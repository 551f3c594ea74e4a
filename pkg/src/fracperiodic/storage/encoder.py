import dataclasses
import json

import numpy as np

from fracperiodic import constants
from fracperiodic.problems.catalog import ProblemSpec
from fracperiodic.solvers.nonlinearities import Nonlinearity, TruncatedNonlinearity
from fracperiodic.space.fields import PeriodicField, SpectralField

##
# ENCODER CLASS
# Add to this to encode package types for result files.
# Fields keep their coefficients so a decoded field evaluates exactly like the original.
# Problem specs and nonlinearities are written as descriptions and come back as plain dicts.
##


class Encoder(json.JSONEncoder):
    def default(self, o, *args):
        if isinstance(o, SpectralField):
            return {
                '__field__': {'n_modes': o.n_modes, 'a': o.a.tolist(), 'b': o.b.tolist()}
            }
        elif isinstance(o, PeriodicField):
            return {
                '__periodic__': {'period': o.period, 'field': o.field}
            }
        elif isinstance(o, ProblemSpec):
            return {'family': o.family, 's': o.s, 'lam': o.lam, 'p': o.p, 'nonlinearity': o.nonlinearity.name}
        elif isinstance(o, (Nonlinearity, TruncatedNonlinearity)):
            return o.name
        elif isinstance(o, np.ndarray):
            return o.tolist()
        elif isinstance(o, np.integer):
            return int(o)
        elif isinstance(o, np.floating):
            return float(o)
        elif isinstance(o, np.bool_):
            return bool(o)
        elif dataclasses.is_dataclass(o) and not isinstance(o, type):
            return {f.name: getattr(o, f.name) for f in dataclasses.fields(o)}
        return super().default(o)


def encode(data, indent=constants.JSON_INDENT) -> str:
    """Sorted keys and a fixed indent, so equal data always gives equal text."""
    return json.dumps(data, cls=Encoder, sort_keys=True, indent=indent)


def as_object(d):
    if '__field__' in d:
        c = d['__field__']
        field = SpectralField(np.array(c['a'], dtype=float), np.array(c['b'], dtype=float))
        assert field.n_modes == c['n_modes'], f'Field record claims {c["n_modes"]} modes but holds {field.n_modes}.'
        return field
    elif '__periodic__' in d:
        return PeriodicField(d['__periodic__']['field'], float(d['__periodic__']['period']))
    return dict(d)


# Nested records decode inside out, so a periodic record already holds a SpectralField.
def decode(data):
    if data is None:
        return None

    if isinstance(data, bytes):
        data = data.decode()

    try:
        return json.loads(data, object_hook=as_object)
    except json.decoder.JSONDecodeError:
        return None
