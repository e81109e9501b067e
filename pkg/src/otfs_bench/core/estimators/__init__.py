# Estimators package
from .impulse import impulse_ls, impulse_mimo_layout
from .lifting import build_lifting_matrix, lifting_index
from .metrics import nmse_dd, nmse_dda
from .omp import omp
from .somp import somp3d

__all__ = [
    "build_lifting_matrix",
    "impulse_ls",
    "impulse_mimo_layout",
    "lifting_index",
    "nmse_dd",
    "nmse_dda",
    "omp",
    "somp3d",
]
