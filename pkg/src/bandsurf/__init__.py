"""Flat banded Seifert surfaces: combinatorial presentations, band-slide
normalization into flat dipole and K_{2,n} graph-diagram form, and
independently computed boundary invariants for verifying that every move
preserves the boundary link."""

from .errors import (BandSurfError, GeometryError, InvalidMoveError,
                     IterationCapExceeded, NonIntegralGenus, ParseError)
from .invariants import (Fingerprint, LaurentPoly, alexander, determinant,
                         fingerprint, fingerprints_agree, signature)
from .moves import (FingerprintMismatch, MoveLog, MoveRecord, SlideSpec,
                    band_slide, flip_disc, normalize, replay, to_dipole,
                    to_k2n)
from .presentation import (Band, DipolePresentation, K2nDiagram, Label,
                           Pairing, SurfacePresentation, barred_pairs,
                           from_matching, from_plumbing_code, is_dipole_ready,
                           pairing_of, parse_presentation, random_basket,
                           relabel, unbarred_pairs)
from .topology import (CoreDiagram, EulerData, GaussCode,
                       boundary_components, boundary_gauss_code, core_diagram,
                       euler_data, seifert_matrix)

__version__ = "0.1.0"
