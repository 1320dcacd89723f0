"""Higher order digital nets over finite fields: construction and verification."""

from hon_forge._limits import EnumerationLimitError
from hon_forge.gf import GF, field_of_order, make_field
from hon_forge.nets import (
    DigitalNet,
    NetParams,
    PointSet,
    dual_space,
    generate_points,
    interlace,
    pascal_net,
    project,
    strict_t,
    verify_net_definition,
)
from hon_forge.walsh import general_strict_t, verify_net_geometric, verify_net_walsh
from hon_forge.bz import CodeChain, combine, pad_depth, rs_chain, rule_xv
from hon_forge.tables import bundled_param_table, sigma_dir, sigma_xv

__version__ = "0.1.0"
