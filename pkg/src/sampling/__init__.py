from sampling.diversity import min_pairwise_distance, select_diverse
from sampling.manifest import (SelectionEntry, SelectionManifest, build_selection,
                               read_selection, write_selection)
from sampling.vectors import (METRICS, MetricVector, compute_metric_vectors,
                              representative_payloads)
