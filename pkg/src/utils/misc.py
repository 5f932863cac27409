import yaml

from collections.abc import Mapping
from pathlib import Path



class InclusiveLoader(yaml.SafeLoader):
    """ Allow use of `!include filename.yml` statement in yaml file """
    def __init__(self, stream):
        super(InclusiveLoader, self).__init__(stream)

    def _resolve(self, node):
        fname = Path(self.construct_scalar(node)).expanduser()
        if not fname.is_absolute() and getattr(self, "name", None):
            # Relative to the including file, not the working directory
            fname = Path(self.name).parent.joinpath(fname)
        return fname.resolve()

    def include(self, node):
        with open(self._resolve(node), 'r') as fd:
            return yaml.load(fd, InclusiveLoader)

    def path(self, node):
        """ `!path file` gives the absolute path of a file next to the yml """
        return str(self._resolve(node))


def load_yaml(fname):
    with open(fname, 'r') as fd:
        return yaml.load(fd, InclusiveLoader) or {}


def rec_update(d, u):
    """ Recursively update dict of any depth """
    for k, v in u.items():
        if isinstance(v, Mapping):
            d[k] = rec_update(d.get(k) or {}, v)
        else:
            # Lists replace: a user giving `languages` means exactly those
            d[k] = v
    return d
