"""Generate, analyse and realize MMP diagrams (hypergraphs of mutually orthogonal atoms)."""

from .canon import CanonicalForm, are_isomorphic, canonical_form
from .diagram import MmpDiagram, ParseError, ValidationReport, parse_mmp, read_diagrams, serialize_mmp, validate
from .generator import Extension, GenerationParams, extensions, generate_all, is_canonical_extension, scan
from .states import admits_01_state, admits_quantum_states, admits_state, classify_state_space, enumerate_01_states

__version__ = "0.1.0"

__all__ = [
    "CanonicalForm",
    "Extension",
    "GenerationParams",
    "MmpDiagram",
    "ParseError",
    "ValidationReport",
    "admits_01_state",
    "admits_quantum_states",
    "admits_state",
    "are_isomorphic",
    "canonical_form",
    "classify_state_space",
    "enumerate_01_states",
    "extensions",
    "generate_all",
    "is_canonical_extension",
    "parse_mmp",
    "read_diagrams",
    "scan",
    "serialize_mmp",
    "validate",
]
