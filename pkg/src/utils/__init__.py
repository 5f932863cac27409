from utils.hashing import canonical_json, file_digest, sha256_bytes, sha256_obj, sha256_text
from utils.misc import InclusiveLoader, load_yaml, rec_update
from utils.tracking import init_tracking



InclusiveLoader.add_constructor("!include", InclusiveLoader.include)
InclusiveLoader.add_constructor("!path", InclusiveLoader.path)
