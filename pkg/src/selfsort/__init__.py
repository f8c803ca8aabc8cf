"""Self-improving sorters for hidden linear classes and hidden product mixtures."""
from .core import ComparisonCounter, VList, build_vlist, merge_sort_counted, predecessor_index
from .generators import (LinearClassSpec, MixtureSpec, ProductSpec, ScalarDist, estimate_perm_entropy,
                         instance_stream, load_spec, save_spec)
from .linear_sorter import LinearSorterModel, sort_linear, train_linear
from .mixture_sorter import MixtureSorterModel, OperationScratch, sort_mixture, train_mixture
from .modelio import load_model, save_model

__all__ = [
    "ComparisonCounter", "VList", "build_vlist", "merge_sort_counted", "predecessor_index",
    "LinearClassSpec", "MixtureSpec", "ProductSpec", "ScalarDist", "estimate_perm_entropy",
    "instance_stream", "load_spec", "save_spec",
    "LinearSorterModel", "sort_linear", "train_linear",
    "MixtureSorterModel", "OperationScratch", "sort_mixture", "train_mixture",
    "load_model", "save_model",
]
__version__ = "0.1.0"
