"""Content-addressed storage of resolutions.

Files are keyed by (group hash, flavor, d_max).  The directory comes from
an explicit argument or the TC_LAB_CACHE environment variable; with
neither, nothing touches the disk.
"""

import json
import logging
import os

log = logging.getLogger(__name__)

ENV_VAR = "TC_LAB_CACHE"


class IoError(OSError):
    pass


def cache_dir(explicit=None):
    d = explicit or os.environ.get(ENV_VAR)
    return d or None


def cache_key(G, flavor, d_max):
    return "%s-%s-d%d" % (G.content_hash(), flavor, d_max)


def cache_path(G, flavor, d_max, directory):
    return os.path.join(directory, cache_key(G, flavor, d_max) + ".json")


def store(R, directory):
    try:
        os.makedirs(directory, exist_ok=True)
        path = cache_path(R.group, R.flavor, R.d_max, directory)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(R.to_json(), fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, path)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return path


def load(G, flavor, d_max, directory):
    """Stored resolution or None; unreadable files are reported and ignored."""
    from .homological_core import FreeResolution
    path = cache_path(G, flavor, d_max, directory)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            obj = json.load(fh)
        R = FreeResolution.from_json(obj, G)
        if R.flavor != flavor or R.d_max != d_max or obj.get("group") != G.content_hash():
            raise ValueError("cache entry does not match its key")
        return R
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        log.warning("ignoring corrupt cache file %s (%s); recomputing", path, exc)
        return None


def load_or_build(G, flavor, d_max, builder, directory=None):
    d = cache_dir(directory)
    if d is None:
        return builder()
    R = load(G, flavor, d_max, d)
    if R is not None:
        return R
    R = builder()
    try:
        store(R, d)
    except IoError as exc:
        log.warning("could not write cache: %s", exc)
    return R
