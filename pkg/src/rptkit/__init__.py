"""Exact combinatorics, cumulant algebra and power counting for renormalized
perturbation theory of gauge fields."""

from .combinatorics import (SetPartition, bell, bell_numbers, dobinski_partial,
                            double_factorial, multinomial, set_partitions)
from .cumulants import (CumulantTable, ModelSpec, MomentTable, between_group_cumulant_audit,
                        compare_cumulant_methods, cumulants_from_moments_partition,
                        cumulants_from_moments_series, moments_from_cumulants)
from .diagrams import (Diagram, Edge, ExternalLeg, Vertex, break_line, count_pairings,
                       enumerate_connected_multigraphs, gauge_invariant_vertex_check,
                       insert_vertex, is_connected, is_one_particle_irreducible, is_prime)
from .power_counting import (DivergenceReport, divergence_report, feynman_combine,
                             loop_degree, paper_degree, per_line_exponent, sobolev_shift,
                             symmetric_mixture, uniformity_probe)
from .series import (Series, add, coefficient, exp_series, first_mismatch, log_series,
                     make_series, mul)
from .variational import (VariationReport, check_2nvar_identity, check_2var_identity,
                          gi_2n_variation, gi_second_variation, multivariate_2var,
                          vacuum_norm_at_limit)

__version__ = "0.1.0"
