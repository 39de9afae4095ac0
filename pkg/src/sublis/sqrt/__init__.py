"""Sqrt(r)-query multiplicative LIS estimation."""

from .chains import (Block, BoxChain, CellPoset, build_cell_poset, chain_cover,
                     reduce_antichains, split_chain)
from .estimate import (SqrtParams, estimate_horizontal, estimate_lis_multiplicative,
                       estimate_vertical, lambda_grid, lambda_sweep, run_pipeline)
from .grid import (DenseCell, Grid, Layering, cells_for_subarray, gridding, layering,
                   layering_rate, subarray_starts, true_box_densities, true_layer_densities)

__all__ = [
    "Block", "BoxChain", "CellPoset", "DenseCell", "Grid", "Layering", "SqrtParams",
    "build_cell_poset", "cells_for_subarray", "chain_cover", "estimate_horizontal",
    "estimate_lis_multiplicative", "estimate_vertical", "gridding", "lambda_grid",
    "lambda_sweep", "layering", "layering_rate", "reduce_antichains", "run_pipeline",
    "split_chain", "subarray_starts", "true_box_densities", "true_layer_densities",
]
