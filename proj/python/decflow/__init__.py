"""Surface Navier-Stokes solver on triangle meshes (discrete exterior calculus)."""

from ._decflow import (
    ConfigError,
    DecflowError,
    Mesh,
    MeshError,
    SolverError,
    eoc_table,
    flatfd_study,
    format_config,
    generate_mesh,
    load_mesh,
    run,
    version,
)

__version__ = version()

__all__ = [
    "ConfigError",
    "DecflowError",
    "Mesh",
    "MeshError",
    "SolverError",
    "eoc_table",
    "flatfd_study",
    "format_config",
    "generate_mesh",
    "load_mesh",
    "run",
    "version",
]
