"""Single writer for the files a run produces.

Every CSV has a header row and floats written with 12 significant digits.
close() writes manifest.json listing each artifact with its sha256 next to
the hash of the canonical config, so two runs of one config can be compared
file by file.
"""
import csv
import hashlib
import json
import os
import os.path as osp

import numpy as np

FLOAT_FORMAT = '%.12g'
MANIFEST = 'manifest.json'


def format_value(v):
    if v is None:
        return ''
    if isinstance(v, (bool, np.bool_)):
        return 'true' if v else 'false'
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FORMAT % float(v)
    return str(v)


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(',', ':'), ensure_ascii=True)


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            h.update(chunk)
    return h.hexdigest()


class ArtifactWriter(object):
    def __init__(self, out_dir, command, config):
        self.out_dir = out_dir
        self.command = command
        self.config = config
        self.artifacts = []
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name):
        return osp.join(self.out_dir, name)

    def write_csv(self, name, fieldnames, rows):
        """rows are dicts keyed by fieldnames or sequences in fieldname order."""
        fieldnames = list(fieldnames)
        path = self.path(name)
        with open(path, 'w', newline='') as f:
            w = csv.DictWriter(f, fieldnames=fieldnames, lineterminator='\n')
            w.writeheader()
            for row in rows:
                if not isinstance(row, dict):
                    row = dict(zip(fieldnames, row))
                w.writerow({k: format_value(row.get(k)) for k in fieldnames})
        self.register(name)
        return path

    def register(self, name):
        if name not in self.artifacts:
            self.artifacts.append(name)

    def config_hash(self):
        return hashlib.sha256(canonical_json(self.config).encode('utf8')).hexdigest()

    def close(self):
        manifest = {
            'command': self.command,
            'config': self.config,
            'config_sha256': self.config_hash(),
            'artifacts': [{'name': name, 'sha256': sha256_file(self.path(name))}
                          for name in sorted(self.artifacts)],
        }
        with open(self.path(MANIFEST), 'w') as f:
            f.write(json.dumps(manifest, sort_keys=True, indent=2))
            f.write('\n')
        return manifest

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            self.close()
        return False
