from .pabulib import (
    RawPbFile,
    build_election,
    dataset_checksum,
    load_election,
    parse_pb,
    serialize_pb,
)

from . import results
