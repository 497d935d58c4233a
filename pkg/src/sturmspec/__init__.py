"""Spectra of Sturmian Hamiltonians and their periodic approximants."""
from .bandscan import Band, BandSet, spectrum, spectrum_bands
from .bandtype import band_labels, classify, duality_pair
from .contfrac import ContFrac, alpha_expansion, make_contfrac, parse_alpha, word_period
from .errors import SturmSpecError
from .ids import dry_tmp_verify, gaps, ids_bruteforce, ids_path
from .interlace import interlacing_check, rank2_decomposition
from .spectree import SpectralTree, boundary_energy, build_tree, psi
from .tracepoly import fricke_vogt_exact, fricke_vogt_residual, trace_eval, trace_poly

__version__ = "0.1.0"

__all__ = [
    "Band", "BandSet", "ContFrac", "SpectralTree", "SturmSpecError",
    "alpha_expansion", "band_labels", "boundary_energy", "build_tree", "classify",
    "dry_tmp_verify", "duality_pair", "fricke_vogt_exact", "fricke_vogt_residual",
    "gaps", "ids_bruteforce", "ids_path", "interlacing_check", "make_contfrac",
    "parse_alpha", "psi", "rank2_decomposition", "spectrum", "spectrum_bands",
    "trace_eval", "trace_poly", "word_period",
]
