"""Sobolev embeddings into Morrey and Campanato spaces, evaluated numerically."""

from .core import (DivergenceError, DomainError, InvalidInput, StepFunction,
                   rearrange)
from .norms import RiSpace, norm, associate_norm, fundamental
from .criteria import (EmbeddingReport, Weight, check_campanato, check_morrey,
                       check_vanishing_campanato, check_vanishing_morrey,
                       kernel_norm_campanato, kernel_norm_morrey,
                       marcinkiewicz_norm, optimal_campanato_domain_norm,
                       optimal_campanato_target, optimal_morrey_domain_norm,
                       optimal_morrey_target)
from .asymptotics import fit_log_power, load_table, verify_corollary
from .specs import SpecError, parse_space, parse_weight

__version__ = "0.1.0"
