""" Stable content hashes, identical across processes and platforms """
import hashlib
import json



def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(',', ':'))


def sha256_bytes(data):
    return hashlib.sha256(data).hexdigest()


def sha256_text(text):
    return sha256_bytes(text.encode("utf-8"))


def sha256_obj(obj):
    return sha256_text(canonical_json(obj))


def file_digest(fname, chunk_size=1 << 20):
    h = hashlib.sha256()
    with open(fname, "rb") as fd:
        for chunk in iter(lambda: fd.read(chunk_size), b''):
            h.update(chunk)
    return h.hexdigest()
