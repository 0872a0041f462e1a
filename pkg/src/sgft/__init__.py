"""Short-graph Fourier transform built on personalized-PageRank windows.

The public API re-exported here covers graph construction, eigenbases, PPR
windows, the transform itself and the convolutional baseline.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .graph import (
    Graph,
    SeedVector,
    build_graph,
    laplacian,
    normalized_laplacian,
    read_edgelist,
    unit_seed,
    volume,
    write_edgelist,
)
from .spectral import (
    EigenBasis,
    combinatorial_basis,
    eigendecompose,
    gft,
    igft,
    load_basis,
    normalized_basis,
    save_basis,
)
from .localization import (
    LocalizationParams,
    Window,
    WindowCache,
    local_spectral_solution,
    verify_ppr,
    window,
    window_matrix,
)
from .transform import (
    SpectrogramMatrix,
    cluster_energies,
    dominant_frequency_map,
    modulate,
    sgft,
    signature_correlation,
    spectrogram,
)
from .baseline import (
    baseline_modulate,
    baseline_sgft,
    baseline_spectrogram,
    graph_convolve,
    heat_kernel,
    translate,
)
from .datasets import grid_graph, knn_graph, linear_graph, load_station_csv, two_waveform_signal
