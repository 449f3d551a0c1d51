"""Tiny helper: expose a dataclass config as command-line overrides."""

import argparse
import dataclasses


def parse_config(cls, argv=None):
    parser = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        if isinstance(default, tuple):
            parser.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, default=default,
                                type=type(default[0]), nargs="+")
        else:
            parser.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, default=default,
                                type=type(default))
    ns = parser.parse_args(argv)
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in vars(ns).items()})
