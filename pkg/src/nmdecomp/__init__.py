"""Counterfactual couple tables, Liu-Lu sorting indicators and Biewen decompositions."""
from .decomposition import (
    DecompositionResult,
    Method,
    SeriesKind,
    SeriesPoint,
    biewen_decompose,
    counterfactual_share,
    counterfactual_table,
    merge_commutation_gap,
    run_series,
)
from .errors import (
    CsvFormatError,
    DataError,
    DegenerateMargins,
    DegenerateSource,
    InfeasibleTarget,
    InfeasibleZeroPattern,
    MethodError,
    NegativeCellError,
    NegativeCountError,
    NegativeSortingSource,
    NotConverged,
)
from .fileio import TableFile, parse_table_csv, read_table, write_table_csv
from .ipf import IpfConfig, ipf_fit
from .ll import SortingMatrix, ll_generalized, ll_simplified
from .nm import nm_2x2, nm_transform
from .tables import (
    ContingencyTable,
    CounterfactualTable,
    Dichotomized2x2,
    FloorMode,
    Margins,
    dichotomize,
    homogamy_share,
    margins,
    merge_categories,
)

__version__ = "0.1.0"
