"""
Модуль моделей: схемы, начальные значения, упаковка параметров и чекпоинты.
"""

from sslvm.model.schemas import AnyModel, CheckpointHeader, MRDModel, SSGPLVMModel, ViewRecord
from sslvm.model.transforms import (
    ALL_GROUPS,
    ParamGroup,
    group_mask,
    layout,
    pack,
    pack_gradients,
    unpack,
)
from sslvm.model.initialization import InitStrategy, init_model, init_mrd_model, simplex_vertices
from sslvm.model.repository import (
    CHECKPOINT_VERSION,
    CheckpointRepository,
    attach_data,
    decode,
    encode,
    load,
    save,
)

__all__ = [
    "ALL_GROUPS",
    "AnyModel",
    "CHECKPOINT_VERSION",
    "CheckpointHeader",
    "CheckpointRepository",
    "InitStrategy",
    "MRDModel",
    "ParamGroup",
    "SSGPLVMModel",
    "ViewRecord",
    "attach_data",
    "decode",
    "encode",
    "group_mask",
    "init_model",
    "init_mrd_model",
    "layout",
    "load",
    "pack",
    "pack_gradients",
    "save",
    "simplex_vertices",
    "unpack",
]
