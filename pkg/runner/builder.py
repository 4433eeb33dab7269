"""
Scenario Builder

Descriptors to domain objects: Schur maps, operators, layer cycles,
iteration configs and contours.
"""
from typing import Optional, Sequence

import numpy as np

from core.errors import UnsupportedVariantError
from models.operators import ContourSpec, DenseOperator, NormalOperator
from models.schur_map import (
    Affine,
    Blaschke,
    Composition,
    Identity,
    InterpolationProblem,
    Mobius,
    Polynomial,
    Product,
    Rational,
    SchurMap,
)
from schemas.scenario import (
    AffineLayer,
    BlaschkeLayer,
    CompositionLayer,
    ConjugationLayer,
    ContourDocument,
    DenseOperatorSpec,
    DiagonalOperatorSpec,
    IdentityLayer,
    InterpolantLayer,
    JordanBlockSpec,
    MobiusLayer,
    NormalOperatorSpec,
    PolynomialLayer,
    ProductLayer,
    RationalLayer,
    Scenario,
    ScenarioMode,
)
from services.iteration.config import IterationConfig, IterationMode
from services.scalar_dynamics import LayerCycle
from services.schur_interp import solve_two_point


def build_map(descriptor) -> SchurMap:
    """One layer descriptor to a SchurMap"""
    if isinstance(descriptor, IdentityLayer):
        return Identity()
    if isinstance(descriptor, AffineLayer):
        return Affine(descriptor.t)
    if isinstance(descriptor, BlaschkeLayer):
        return Blaschke(descriptor.t)
    if isinstance(descriptor, MobiusLayer):
        return Mobius(descriptor.a, descriptor.b, descriptor.c, descriptor.d)
    if isinstance(descriptor, PolynomialLayer):
        return Polynomial(tuple(descriptor.coeffs))
    if isinstance(descriptor, RationalLayer):
        return Rational(tuple(descriptor.numerator), tuple(descriptor.denominator))
    if isinstance(descriptor, CompositionLayer):
        return Composition(tuple(build_map(inner) for inner in descriptor.layers))
    if isinstance(descriptor, ProductLayer):
        return Product(tuple(build_map(factor) for factor in descriptor.factors))
    if isinstance(descriptor, InterpolantLayer):
        return solve_two_point(InterpolationProblem(descriptor.t), build_map(descriptor.phi)).s
    raise UnsupportedVariantError(f"layer kind '{descriptor.kind}' has no scalar map")


def build_layers(descriptors: Sequence) -> list[SchurMap]:
    """Scalar layers of a scenario (conjugation layers carry no map)"""
    return [build_map(d) for d in descriptors if not isinstance(d, ConjugationLayer)]


def build_operator(descriptor):
    """
    Operator descriptor to a NormalOperator (diagonal, normal) or a
    DenseOperator (dense, jordan_block)
    """
    if isinstance(descriptor, DiagonalOperatorSpec):
        return NormalOperator.diagonal(descriptor.data)
    if isinstance(descriptor, NormalOperatorSpec):
        return NormalOperator(np.array(descriptor.data.eigenvalues), descriptor.data.eigenbasis)
    if isinstance(descriptor, DenseOperatorSpec):
        return DenseOperator(descriptor.data)
    if isinstance(descriptor, JordanBlockSpec):
        n = descriptor.data.size
        block = descriptor.data.eigenvalue * np.eye(n, dtype=complex) + np.eye(n, k=1, dtype=complex)
        return DenseOperator(block)
    raise UnsupportedVariantError(f"operator kind '{descriptor.kind}' is not supported")


def build_cycle(scenario: Scenario) -> Optional[LayerCycle]:
    """Admitted layer cycle, or None when the scenario has no scalar layers"""
    layers = build_layers(scenario.layers)
    return LayerCycle(tuple(layers)) if layers else None


def build_config(scenario: Scenario) -> IterationConfig:
    mode = IterationMode.FUNCTION if scenario.mode == ScenarioMode.RIESZ else IterationMode(scenario.mode.value)
    conjugator = None
    if scenario.mode == ScenarioMode.CONJUGATION:
        conjugator = scenario.layers[0].matrix
    return IterationConfig(
        mode=mode,
        tol=scenario.tolerance,
        max_stages=scenario.max_stages,
        cycle_window=scenario.cycle_window,
        conjugator=conjugator,
    )


def build_contour(document: Optional[ContourDocument]) -> Optional[ContourSpec]:
    if document is None:
        return None
    return ContourSpec(center=document.center, radius=document.radius, nodes=document.nodes)
